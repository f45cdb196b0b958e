use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::Field;

/// A malformed scalar literal, with the byte offset of the problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal {src:?} at offset {pos}: {msg}")]
pub struct LiteralError {
    pub src: String,
    pub pos: usize,
    pub msg: String,
}

impl LiteralError {
    pub fn new(src: &str, pos: usize, msg: &str) -> Self {
        LiteralError { src: src.to_string(), pos, msg: msg.to_string() }
    }
}

/// Parse a scalar literal such as `3/2`, `q - q^-1` or `(q^2-1)/(q+1)`.
///
/// The symbol `q` evaluates to `q_value`, so the same text yields a rational
/// function in symbolic mode and a rational number in numeric mode.
/// Exponents are integers and may be negative.
pub fn parse_literal<F: Field>(src: &str, q_value: &F) -> Result<F, LiteralError> {
    let mut p = Parser { src, bytes: src.as_bytes(), pos: 0, q: q_value };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(p.err("empty literal"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(v)
}

struct Parser<'a, F> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    q: &'a F,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, msg: &str) -> LiteralError {
        LiteralError::new(self.src, self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<F, LiteralError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<F, LiteralError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).map_err(|_| LiteralError::new(self.src, at, "division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<F, LiteralError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<F, LiteralError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        self.pos += 1;
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected an integer exponent"));
        }
        let e: i64 = digits.parse().map_err(|_| self.err("exponent too large"))?;
        let e = if neg { -e } else { e };
        base.pow_i(e).map_err(|_| LiteralError::new(self.src, at, "negative power of zero"))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<F, LiteralError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(self.q.clone())
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().expect("ascii digits");
                Ok(F::from_rational(&BigRational::from_integer(n)))
            }
            Some(_) => Err(self.err("expected a number, 'q' or '('")),
            None => Err(self.err("unexpected end of literal")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{RatFunc, Rational};

    #[test]
    fn numeric_literals() {
        let q = Rational::new(3, 2);
        assert_eq!(parse_literal("3/2", &q).unwrap(), Rational::new(3, 2));
        assert_eq!(parse_literal("-7", &q).unwrap(), Rational::new(-7, 1));
        assert_eq!(parse_literal("q - q^-1", &q).unwrap(), Rational::new(5, 6));
        assert_eq!(parse_literal("-q^2", &q).unwrap(), Rational::new(-9, 4));
        assert_eq!(parse_literal("2*(q+1)", &q).unwrap(), Rational::new(5, 1));
    }

    #[test]
    fn errors_carry_offsets() {
        let q = Rational::new(3, 2);
        let e = parse_literal("1/0", &q).unwrap_err();
        assert_eq!(e.pos, 1);
        let e = parse_literal("2 + x", &q).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_literal("", &q).is_err());
        assert!(parse_literal("(1+q", &q).is_err());
        assert!(parse_literal("q^", &q).is_err());
    }

    #[test]
    fn round_trip_symbolic() {
        let q = RatFunc::q();
        for s in ["q^2-1", "(q^2+1)/(q^3-q)", "(1/2)/q", "-3*q+7/5", "0"] {
            let v: RatFunc = parse_literal(s, &q).unwrap();
            assert_eq!(parse_literal(&v.to_literal(), &q).unwrap(), v, "{s}");
        }
    }
}
