use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::{rational_literal, Field, ScalarError};

/// Rational function in the deformation parameter `q` with rational
/// coefficients.
///
/// Canonical form: numerator and denominator coprime, denominator monic, and
/// the zero function is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        RatFunc { num: Poly::monomial(1), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num: Poly::zero(), den: Poly::one() };
        }
        // Laurent fast path: denominator c * q^k
        let (num, den) = if den.coeffs().len() == 1 || is_monomial(&den) {
            let k = den.degree().unwrap_or(0);
            let v = num.valuation().unwrap_or(0).min(k);
            (num.shift_down(v), den.shift_down(v))
        } else {
            let g = Poly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let s = lead.recip();
            RatFunc { num: num.scale(&s), den: den.scale(&s) }
        }
    }

    /// Exact value at `q = q0`.
    pub fn eval(&self, q0: &BigRational) -> Result<BigRational, ScalarError> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(ScalarError::Pole(rational_literal(q0)));
        }
        Ok(self.num.eval(q0) / d)
    }

    /// Taylor coefficients of the expansion at `q = 1` in powers of `(q - 1)`,
    /// orders `0..=order`. Fails with [`ScalarError::Pole`] when `q = 1` is a pole.
    pub fn series_at_one(&self, order: usize) -> Result<Vec<BigRational>, ScalarError> {
        let (val, coeffs) = self.laurent_at_one(order)?;
        if val < 0 {
            return Err(ScalarError::Pole("1".into()));
        }
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, c) in coeffs.into_iter().enumerate() {
            let k = i + val as usize;
            if k <= order {
                out[k] = c;
            }
        }
        Ok(out)
    }

    /// Laurent expansion at `q = 1`: returns the valuation `v` and the
    /// coefficients of `(q-1)^v, (q-1)^{v+1}, …` up to and including the
    /// power `order` (or at least the leading coefficient when `v > order`).
    pub fn laurent_at_one(&self, order: usize) -> Result<(i64, Vec<BigRational>), ScalarError> {
        if self.num.is_zero() {
            return Ok((0, vec![BigRational::zero(); order + 1]));
        }
        let n = self.num.taylor_at_one();
        let d = self.den.taylor_at_one();
        let vn = n.valuation().unwrap();
        let vd = d.valuation().unwrap();
        let n = n.shift_down(vn);
        let d = d.shift_down(vd);
        let val = vn as i64 - vd as i64;
        let count = if (order as i64) < val { 1 } else { (order as i64 - val) as usize + 1 };
        // power-series division n / d, d(0) != 0
        let d0 = d.coeffs()[0].clone();
        let mut out: Vec<BigRational> = Vec::with_capacity(count);
        for k in 0..count {
            let mut acc = n.coeffs().get(k).cloned().unwrap_or_else(BigRational::zero);
            for (j, c) in out.iter().enumerate() {
                if let Some(dk) = d.coeffs().get(k - j) {
                    acc -= c * dk;
                }
            }
            out.push(acc / &d0);
        }
        Ok((val, out))
    }
}

fn is_monomial(p: &Poly) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
    fn from_rational(r: &BigRational) -> Self {
        RatFunc { num: Poly::constant(r.clone()), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        Self::canonical(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { num: self.num.mul(&rhs.num), den: Poly::one() };
        }
        Self::canonical(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }
    fn to_literal(&self) -> String {
        let n = self.num.render("q");
        if self.den.is_one() {
            return n;
        }
        let wrap = |s: String, p: &Poly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(self.den.render("q"), &self.den))
    }
    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_literal;

    fn rf(s: &str) -> RatFunc {
        parse_literal(s, &RatFunc::q()).unwrap()
    }

    fn br(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn additive_inverse() {
        assert!(rf("q").add(&rf("-q")).is_zero());
    }

    #[test]
    fn lambda_times_q() {
        assert_eq!(rf("q - q^-1").mul(&rf("q")), rf("q^2 - 1"));
    }

    #[test]
    fn canonical_form() {
        let a = rf("(q^2-1)/(q-1)");
        assert_eq!(a, rf("q+1"));
        assert!(a.denominator().is_one());
        let b = rf("(2*q)/(4*q^2)");
        assert_eq!(b.to_literal(), "(1/2)/q");
        assert_eq!(b.denominator(), &Poly::monomial(1));
    }

    #[test]
    fn eval_and_poles() {
        assert_eq!(rf("q - q^-1").eval(&br(2, 1)).unwrap(), br(3, 2));
        assert_eq!(rf("q - q^-1").eval(&br(1, 1)).unwrap(), br(0, 1));
        assert!(matches!(rf("1/(q-1)").eval(&br(1, 1)), Err(ScalarError::Pole(_))));
    }

    #[test]
    fn series() {
        // q - 1/q at q = 1 + t: 2t - t^2 + …
        assert_eq!(rf("q - q^-1").series_at_one(1).unwrap(), vec![br(0, 1), br(2, 1)]);
        assert_eq!(rf("q").series_at_one(1).unwrap(), vec![br(1, 1), br(1, 1)]);
        assert_eq!(rf("1/q").series_at_one(2).unwrap(), vec![br(1, 1), br(-1, 1), br(1, 1)]);
        assert!(rf("1/(q-1)").series_at_one(1).is_err());
        let (v, c) = rf("1/(q^2-1)").laurent_at_one(0).unwrap();
        assert_eq!(v, -1);
        assert_eq!(c, vec![br(1, 2), br(-1, 4)]);
    }
}
