use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense univariate polynomial over the rationals, coefficients stored from
/// the constant term upwards. Trailing zeros are never stored, so the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Lowest power of `x` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = rhs.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Division by `x^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Poly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, rhs: &Poly) -> (Poly, Poly) {
        let d = rhs.degree().expect("polynomial division by zero");
        let lead = rhs.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic rescaling; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficients of `p(1 + t)` as a polynomial in `t`.
    pub fn taylor_at_one(&self) -> Poly {
        // repeated synthetic division by (x - 1)
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(work.len());
        while !work.is_empty() {
            let n = work.len();
            for i in (0..n - 1).rev() {
                let hi = work[i + 1].clone();
                work[i] += hi;
            }
            out.push(work.remove(0));
        }
        Poly::from_coeffs(out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("q"))
    }
}

impl Poly {
    /// Render in the scalar literal grammar using `var` for the indeterminate.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigRational::zero();
            let mag = if neg { -c } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { "-" } else { "+" });
            }
            let mag_str = super::rational_literal(&mag);
            match k {
                0 => s.push_str(&mag_str),
                _ => {
                    if !mag.is_one() {
                        if mag.denom().is_one() {
                            s.push_str(&mag_str);
                        } else {
                            s.push_str(&format!("({mag_str})"));
                        }
                        s.push('*');
                    }
                    s.push_str(var);
                    if k > 1 {
                        s.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn div_rem_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[-1, 1]);
        let (q, rem) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(rem.is_zero());
        let c = Poly::from_ints(&[1, 2, 1]);
        assert_eq!(Poly::gcd(&a, &c), Poly::from_ints(&[1, 1]));
    }

    #[test]
    fn taylor_shift() {
        // x^2 at x = 1 + t is 1 + 2t + t^2
        assert_eq!(Poly::from_ints(&[0, 0, 1]).taylor_at_one(), Poly::from_ints(&[1, 2, 1]));
        assert_eq!(Poly::from_ints(&[3]).taylor_at_one(), Poly::from_ints(&[3]));
        assert_eq!(Poly::from_ints(&[5, 1]).eval(&r(2)), r(7));
    }

    #[test]
    fn render() {
        assert_eq!(Poly::from_ints(&[-1, 0, 1]).render("q"), "q^2-1");
        assert_eq!(Poly::from_ints(&[0, -2]).render("q"), "-2*q");
    }
}
