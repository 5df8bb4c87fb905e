use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::Field;
use super::numeric::NumericScalar;
use super::poly::{rat_to_f64, QPoly};
use crate::error::{Error, Result};
use crate::expr::ParseError;

/// Relative threshold under which a denominator counts as vanishing.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Exact rational function in the formal variable `q`.
///
/// Always stored reduced: `gcd(numer, denom) = 1` and `denom` monic, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QScalar {
    num: QPoly,
    den: QPoly,
}

impl QScalar {
    /// Builds `num / den` in canonical form. Panics when `den` is zero.
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "QScalar with zero denominator");
        if num.is_zero() {
            return Self::zero_value();
        }
        let g = QPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            QScalar { num, den }
        } else {
            let inv = lc.recip();
            QScalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// Fallible constructor for untrusted input.
    pub fn try_new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self::new(num, den))
    }

    fn zero_value() -> Self {
        QScalar { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn from_poly(p: QPoly) -> Self {
        QScalar { num: p, den: QPoly::one() }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn rational(r: BigRational) -> Self {
        Self::from_poly(QPoly::constant(r))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(n.into(), d.into()))
    }

    /// The formal variable `q`.
    pub fn q() -> Self {
        Self::from_poly(QPoly::x())
    }

    /// `q^n` for any integer `n`; negative powers are stored as `1/q^|n|`.
    pub fn q_pow(n: i64) -> Self {
        let d = n.unsigned_abs() as usize;
        let mono = QPoly::monomial(BigRational::one(), d);
        if n >= 0 {
            Self::from_poly(mono)
        } else {
            QScalar { num: QPoly::one(), den: mono }
        }
    }

    /// Builds `sum c_j q^j` from a Laurent coefficient map.
    pub fn from_laurent(terms: &BTreeMap<i64, BigRational>) -> Self {
        let min = terms.keys().next().copied().unwrap_or(0).min(0);
        let max = terms.keys().next_back().copied().unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); (max - min + 1) as usize];
        for (j, c) in terms {
            coeffs[(j - min) as usize] += c;
        }
        Self::new(QPoly::from_coeffs(coeffs), QPoly::monomial(BigRational::one(), (-min) as usize))
    }

    /// Laurent expansion when the denominator is a pure power of `q`.
    pub fn laurent_terms(&self) -> Option<BTreeMap<i64, BigRational>> {
        if !self.den.is_monomial() {
            return None;
        }
        let shift = self.den.degree().unwrap_or(0) as i64;
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 - shift, c.clone()))
                .collect(),
        )
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The rational value when `q` does not occur.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn pow(&self, n: i64) -> Option<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let e = n.unsigned_abs() as u32;
        // coprime monic inputs give coprime monic powers
        Some(QScalar { num: base.num.pow(e), den: base.den.pow(e) })
    }

    /// Substitutes a complex value for `q`.
    pub fn specialize(&self, qval: NumericScalar) -> Result<NumericScalar> {
        let z = qval.value();
        let den = self.den.eval_complex(z);
        let scale = self.den.eval_scale(z).max(f64::MIN_POSITIVE);
        if den.norm() <= POLE_TOLERANCE * scale {
            return Err(Error::Pole {
                factor: self.den.to_string(),
                at: NumericScalar::from(z).to_string(),
                magnitude: den.norm(),
            });
        }
        // f64 inputs are exact dyadic rationals; evaluating exactly and rounding
        // once avoids cancellation in high-degree numerators
        let (Some(re), Some(im)) = (BigRational::from_float(z.re), BigRational::from_float(z.im)) else {
            return Err(Error::NonFinite("specialize".into()));
        };
        let (a, b) = self.num.eval_gaussian(&re, &im);
        let (c, d) = self.den.eval_gaussian(&re, &im);
        let norm = &c * &c + &d * &d;
        if norm.is_zero() {
            return Err(Error::Pole { factor: self.den.to_string(), at: qval.to_string(), magnitude: 0.0 });
        }
        let out_re = (&a * &c + &b * &d) / &norm;
        let out_im = (&b * &c - &a * &d) / &norm;
        NumericScalar::checked(Complex64::new(rat_to_f64(&out_re), rat_to_f64(&out_im)), "specialize")
    }

    /// Substitutes a rational value for `q`.
    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_rational(x) / d)
        }
    }

    /// Bit-size proxy used by size guards.
    pub fn complexity(&self) -> usize {
        let bits = |p: &QPoly| p.coeffs().iter().map(|c| c.numer().bits() + c.denom().bits()).sum::<u64>();
        (bits(&self.num) + bits(&self.den)) as usize
    }
}

impl Default for QScalar {
    fn default() -> Self {
        Self::zero_value()
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl FromStr for QScalar {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        crate::expr::parse_qscalar(s)
    }
}

impl Serialize for QScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return QScalar::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = QPoly::gcd(&self.den, &rhs.den);
        let (bl, br) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (self.den.div_exact(&g), rhs.den.div_exact(&g))
        };
        let num = &(&self.num * &br) + &(&rhs.num * &bl);
        QScalar::new(num, &bl * &rhs.den)
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self + &(-rhs)
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        if self.is_zero() || rhs.is_zero() {
            return QScalar::zero_value();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QScalar::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel before multiplying to keep intermediate degrees small
        let g1 = QPoly::gcd(&self.num, &rhs.den);
        let g2 = QPoly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1);
        let d2 = rhs.den.div_exact(&g1);
        let n2 = rhs.num.div_exact(&g2);
        let d1 = self.den.div_exact(&g2);
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading().expect("nonzero").recip();
        QScalar { num: num.scale(&lc), den: den.scale(&lc) }
    }
}

impl Div for &QScalar {
    type Output = QScalar;
    fn div(self, rhs: &QScalar) -> QScalar {
        self * &rhs.inv().expect("division by zero QScalar")
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::integer(n)
    }
}

impl Field for QScalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::zero_value()
    }
    fn one() -> Self {
        Self::from_poly(QPoly::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::integer(n)
    }
    fn from_rational(r: &BigRational) -> Self {
        Self::rational(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn powi(&self, n: i64) -> Option<Self> {
        self.pow(n)
    }
    fn cost(&self) -> usize {
        self.complexity()
    }
    fn from_qscalar(x: &QScalar, _q: &Self) -> Result<Self> {
        Ok(x.clone())
    }
}

/// Convenience used by tests and the builders: `q - q^-1`.
pub fn q_minus_qinv() -> QScalar {
    &QScalar::q() - &QScalar::q_pow(-1)
}
