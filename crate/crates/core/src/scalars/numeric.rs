use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::poly::rat_to_f64;
use super::qscalar::QScalar;
use crate::error::{Error, Result};

/// Default relative tolerance for numeric comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Complex double-precision value used for specialized `q`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct NumericScalar(Complex64);

impl NumericScalar {
    pub fn new(re: f64, im: f64) -> Self {
        NumericScalar(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0)
    }

    /// `e^{i theta}`
    pub fn unit(theta: f64) -> Self {
        NumericScalar(Complex64::from_polar(1.0, theta))
    }

    /// The primitive root of unity `e^{2 pi i / d}`.
    pub fn root_of_unity(d: u32) -> Self {
        Self::unit(2.0 * PI / d as f64)
    }

    pub fn checked(z: Complex64, what: &str) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(NumericScalar(z))
        } else {
            Err(Error::NonFinite(what.to_string()))
        }
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }

    /// Smallest `d <= max_order` with `|z^d - 1| < tol`, if any.
    pub fn root_of_unity_order(self, max_order: u32, tol: f64) -> Option<u32> {
        if (self.norm() - 1.0).abs() > tol {
            return None;
        }
        let mut acc = Complex64::new(1.0, 0.0);
        for d in 1..=max_order {
            acc *= self.0;
            if (acc - 1.0).norm() < tol * d as f64 {
                return Some(d);
            }
        }
        None
    }
}

impl From<Complex64> for NumericScalar {
    fn from(z: Complex64) -> Self {
        NumericScalar(z)
    }
}

impl fmt::Display for NumericScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re}")
        } else if im < 0.0 {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i`, `exp(t i)` (meaning `e^{i t}`)
/// and `root(d)` (meaning `e^{2 pi i / d}`).
impl FromStr for NumericScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Domain(format!("cannot parse complex number `{s}`"));
        if let Some(inner) = t.strip_prefix("root(").and_then(|r| r.strip_suffix(')')) {
            let d: u32 = inner.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Self::root_of_unity(d));
        }
        if let Some(inner) = t.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
            let theta = inner.strip_suffix('i').ok_or_else(bad)?;
            let theta: f64 = if theta.is_empty() { 1.0 } else { theta.trim_end_matches('*').parse().map_err(|_| bad())? };
            return Ok(Self::unit(theta));
        }
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not an exponent sign
            let bytes = body.as_bytes();
            let mut split = None;
            for i in (1..bytes.len()).rev() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                    split = Some(i);
                    break;
                }
            }
            let parse_im = |txt: &str| -> Result<f64> {
                match txt {
                    "" | "+" => Ok(1.0),
                    "-" => Ok(-1.0),
                    other => other.trim_end_matches('*').parse().map_err(|_| bad()),
                }
            };
            return match split {
                Some(i) => {
                    let re: f64 = body[..i].parse().map_err(|_| bad())?;
                    Self::checked(Complex64::new(re, parse_im(&body[i..])?), "parse")
                }
                None => Self::checked(Complex64::new(0.0, parse_im(body)?), "parse"),
            };
        }
        let re: f64 = t.parse().map_err(|_| bad())?;
        Self::checked(Complex64::new(re, 0.0), "parse")
    }
}

impl Field for NumericScalar {
    const EXACT: bool = false;

    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
    fn one() -> Self {
        Self::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Self::new(n as f64, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        Self::new(rat_to_f64(r), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        NumericScalar(self.0 + rhs.0)
    }
    fn minus(&self, rhs: &Self) -> Self {
        NumericScalar(self.0 - rhs.0)
    }
    fn times(&self, rhs: &Self) -> Self {
        NumericScalar(self.0 * rhs.0)
    }
    fn negate(&self) -> Self {
        NumericScalar(-self.0)
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(NumericScalar(self.0.inv()))
        }
    }
    fn magnitude(&self) -> f64 {
        self.0.norm()
    }
    fn powi(&self, n: i64) -> Option<Self> {
        if self.is_zero() && n < 0 {
            return None;
        }
        Some(NumericScalar(self.0.powi(n as i32)))
    }
    fn from_qscalar(x: &QScalar, q: &Self) -> Result<Self> {
        x.specialize(*q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!("1.1".parse::<NumericScalar>().unwrap(), NumericScalar::real(1.1));
        assert_eq!("1-2i".parse::<NumericScalar>().unwrap(), NumericScalar::new(1.0, -2.0));
        assert_eq!("i".parse::<NumericScalar>().unwrap(), NumericScalar::new(0.0, 1.0));
        assert_eq!("1e-3+2e-2i".parse::<NumericScalar>().unwrap(), NumericScalar::new(1e-3, 2e-2));
        let z: NumericScalar = "exp(1i)".parse().unwrap();
        assert!((z.value() - Complex64::from_polar(1.0, 1.0)).norm() < 1e-15);
        let r: NumericScalar = "root(5)".parse().unwrap();
        assert_eq!(r.root_of_unity_order(100, 1e-9), Some(5));
        assert!("abc".parse::<NumericScalar>().is_err());
    }

    #[test]
    fn generic_unit_circle_point_is_not_a_root() {
        assert_eq!(NumericScalar::unit(1.0).root_of_unity_order(1000, 1e-9), None);
        assert_eq!(NumericScalar::real(1.1).root_of_unity_order(1000, 1e-9), None);
    }
}
