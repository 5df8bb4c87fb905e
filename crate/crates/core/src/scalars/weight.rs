use std::fmt;
use std::ops::{Add, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::numeric::NumericScalar;
use super::poly::rat_to_f64;
use super::qscalar::QScalar;
use crate::error::{Error, Result};

/// The formal value `u + v * pi * hbar^-1 * i`.
///
/// `exp(hbar * w) = q^u * (-1)^v` whenever both parts are integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ExtendedWeight {
    #[serde(with = "rational_string")]
    pub u: BigRational,
    #[serde(with = "rational_string")]
    pub v: BigRational,
}

impl ExtendedWeight {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        ExtendedWeight { u, v }
    }

    pub fn integers(u: i64, v: i64) -> Self {
        Self::new(BigRational::from_integer(u.into()), BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Self::integers(0, 0)
    }

    /// `r_{k,eps}`: `2k pi hbar^-1 i` for eps = 1, `(2k+1) pi hbar^-1 i` for eps = -1.
    pub fn twist(k: i64, eps: i8) -> Self {
        let v = if eps == 1 { 2 * k } else { 2 * k + 1 };
        Self::integers(0, v)
    }

    pub fn is_integral(&self) -> bool {
        self.u.is_integer() && self.v.is_integer()
    }

    /// Integer parts, or an error naming the offending weight.
    pub fn integer_parts(&self) -> Result<(i64, i64)> {
        if !self.is_integral() {
            return Err(Error::NonIntegerWeight(self.to_string()));
        }
        let u = self.u.to_integer().to_i64();
        let v = self.v.to_integer().to_i64();
        match (u, v) {
            (Some(u), Some(v)) if u.abs() <= 1_000_000 => Ok((u, v)),
            _ => Err(Error::ExponentOverflow(i128::MAX)),
        }
    }

    /// `exp(hbar * w) = (-1)^v q^u`.
    pub fn exp_hbar(&self) -> Result<QScalar> {
        let (u, v) = self.integer_parts()?;
        let sign = if v.is_odd() { -1 } else { 1 };
        Ok(&QScalar::integer(sign) * &QScalar::q_pow(u))
    }

    /// Numeric value `u + v * pi / hbar * i` for a concrete `hbar`.
    pub fn at_hbar(&self, hbar: NumericScalar) -> Result<NumericScalar> {
        let u = rat_to_f64(&self.u);
        let v = rat_to_f64(&self.v);
        let z = Complex64::new(u, 0.0) + Complex64::new(0.0, v * std::f64::consts::PI) / hbar.value();
        NumericScalar::checked(z, "extended weight evaluation")
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
}

impl Add for &ExtendedWeight {
    type Output = ExtendedWeight;
    fn add(self, rhs: &ExtendedWeight) -> ExtendedWeight {
        ExtendedWeight::new(&self.u + &rhs.u, &self.v + &rhs.v)
    }
}

impl Sub for &ExtendedWeight {
    type Output = ExtendedWeight;
    fn sub(self, rhs: &ExtendedWeight) -> ExtendedWeight {
        ExtendedWeight::new(&self.u - &rhs.u, &self.v - &rhs.v)
    }
}

impl fmt::Display for ExtendedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*pi*i/hbar", self.u, self.v)
    }
}

mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
