//! Exact coefficient fields.
//!
//! Two scalar modes share the [`Field`] interface: [`RatFunc`] keeps the
//! deformation parameter `q` symbolic, [`Rational`] fixes it to an exact
//! rational value. Every algorithm in the crate is generic over `Field`, so
//! switching modes never changes a code path.

mod parse;
mod poly;
mod ratfunc;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use parse::{parse_literal, LiteralError};
pub use poly::Poly;
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {0}")]
    Pole(String),
}

/// A field of exact scalars.
///
/// Implementations keep values canonical, so `==` is equality of field
/// elements.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;

    /// Human-readable literal in the scalar grammar accepted by [`parse_literal`].
    fn to_literal(&self) -> String;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = self.add(rhs);
    }

    /// `self += a * b`, the workhorse of every contraction.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    fn pow_i(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

/// Scalar mode and the matching value of the deformation parameter.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ScalarMode {
    Symbolic,
    Numeric { q: String },
}

impl ScalarMode {
    pub fn numeric(q: &BigRational) -> Self {
        ScalarMode::Numeric { q: rational_literal(q) }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ScalarMode::Symbolic)
    }
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Symbolic => write!(f, "symbolic"),
            ScalarMode::Numeric { q } => write!(f, "numeric(q={q})"),
        }
    }
}

/// The value of `q` inside a field: the symbol itself or a fixed rational.
pub trait HasParameter: Field {
    fn parameter(mode: &ScalarMode) -> Result<Self, LiteralError>;
}

/// Numeric-q scalar: an exact rational.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational_literal(&self.0))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational_literal(&self.0))
    }
}

pub(crate) fn rational_literal(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_rational(r: &BigRational) -> Self {
        Rational(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.0.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }
    fn to_literal(&self) -> String {
        rational_literal(&self.0)
    }
    fn add_assign(&mut self, rhs: &Self) {
        self.0 += &rhs.0;
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.0.is_zero() || b.0.is_zero() {
            return;
        }
        self.0 += &a.0 * &b.0;
    }
}

impl HasParameter for Rational {
    fn parameter(mode: &ScalarMode) -> Result<Self, LiteralError> {
        match mode {
            ScalarMode::Numeric { q } => {
                let v = parse_literal::<Rational>(q, &Rational::zero())?;
                if v.0.is_negative() || v.0.is_zero() {
                    return Err(LiteralError::new(q, 0, "q must be a positive rational"));
                }
                Ok(v)
            }
            ScalarMode::Symbolic => Err(LiteralError::new(
                "",
                0,
                "numeric scalars need a numeric q value",
            )),
        }
    }
}

impl HasParameter for RatFunc {
    fn parameter(mode: &ScalarMode) -> Result<Self, LiteralError> {
        match mode {
            ScalarMode::Symbolic => Ok(RatFunc::q()),
            ScalarMode::Numeric { .. } => Err(LiteralError::new(
                "",
                0,
                "symbolic scalars cannot be specialised to a numeric q",
            )),
        }
    }
}
