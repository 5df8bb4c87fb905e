use std::fmt;

use num_rational::BigRational;

use super::QScalar;
use crate::error::Result;

/// Coefficient field shared by the symbolic and numeric code paths.
///
/// Arithmetic goes through borrowed-operand methods so that exact coefficients
/// are never cloned just to be added.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Exact fields compare with `==`; inexact ones need a tolerance.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;

    /// Structural zero. Numeric values are zero only when exactly 0.
    fn is_zero(&self) -> bool;

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn inverse(&self) -> Option<Self>;

    /// Absolute value for numeric fields. Exact fields return 0 or 1.
    fn magnitude(&self) -> f64;

    /// Rough size used to pick cheap pivots in exact elimination.
    fn cost(&self) -> usize {
        0
    }

    /// Maps a symbolic scalar into this field, given the field's value of `q`.
    fn from_qscalar(x: &QScalar, q: &Self) -> Result<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn divide(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self.times(&inv))
    }

    /// Integer power; negative exponents invert. Returns `None` for `0^-n`.
    fn powi(&self, n: i64) -> Option<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut b = base;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.times(&b);
            }
        }
        Some(acc)
    }

    /// Zero test against an absolute tolerance (ignored by exact fields).
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }
}
