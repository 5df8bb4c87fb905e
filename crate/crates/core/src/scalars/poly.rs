use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense univariate polynomial with exact rational coefficients, lowest degree first.
///
/// The coefficient vector never carries trailing zeros, so the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^deg`
    pub fn monomial(c: BigRational, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        coeffs[deg] = c;
        QPoly { coeffs }
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
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

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True when the polynomial is `c * x^k` for some k.
    pub fn is_monomial(&self) -> bool {
        match self.valuation() {
            Some(v) => v + 1 == self.coeffs.len(),
            None => false,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Divide by `x^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        debug_assert!(self.valuation().is_some_and(|v| v >= k));
        QPoly { coeffs: self.coeffs[k..].to_vec() }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Exact division; panics in debug builds when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &QPoly) -> QPoly {
        if divisor.is_one() {
            return self.clone();
        }
        if divisor.is_constant() {
            return self.scale(&divisor.coeffs[0].recip());
        }
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        // powers of x are handled separately, which keeps the common
        // Laurent-type inputs away from the Euclidean loop
        let va = a.valuation().unwrap_or(0);
        let vb = b.valuation().unwrap_or(0);
        let xpow = va.min(vb);
        let a = a.shift_down(va);
        let b = b.shift_down(vb);
        let core = if a.is_constant() || b.is_constant() {
            Self::one()
        } else {
            let (mut x, mut y) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
            while !y.is_zero() {
                let (_, r) = x.div_rem(&y);
                x = y;
                y = r.monic();
            }
            x.monic()
        };
        core.shift_up(xpow)
    }

    /// Distinct rational roots, by the rational root theorem on the
    /// square-free part. `None` if the constant or leading coefficient is too
    /// large to factor by trial division.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        if self.is_zero() {
            return Some(Vec::new());
        }
        let mut roots = Vec::new();
        let v = self.valuation().unwrap_or(0);
        if v > 0 {
            roots.push(BigRational::zero());
        }
        let p = self.shift_down(v);
        let d = Self::gcd(&p, &p.derivative());
        let sq = if d.is_constant() { p } else { p.div_exact(&d) };
        if sq.is_constant() {
            return Some(roots);
        }
        // clear denominators
        let lcm = sq.coeffs.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> = sq.coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = small_divisors(&ints[0])?;
        let an = small_divisors(ints.last().expect("nonconstant"))?;
        for p in &a0 {
            for q in &an {
                for sign in [1, -1] {
                    let r = BigRational::new(p * sign, q.clone());
                    if sq.eval_rational(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(rat_to_f64(c), 0.0);
        }
        acc
    }

    /// Exact value at the Gaussian rational `re + im*i`, as `(re, im)`.
    pub fn eval_gaussian(&self, re: &BigRational, im: &BigRational) -> (BigRational, BigRational) {
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            let na = &a * re - &b * im + c;
            let nb = &a * im + &b * re;
            a = na;
            b = nb;
        }
        (a, b)
    }

    /// Sum of |c_i| |z|^i, the natural magnitude scale of an evaluation at `z`.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + rat_to_f64(c).abs();
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Writes the polynomial in the variable `var`, highest degree first.
    pub fn fmt_with(&self, var: &str, f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let coeff_str = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            match i {
                0 => f.write_str(&coeff_str)?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{coeff_str}*")?;
                    }
                    if i == 1 {
                        f.write_str(var)?;
                    } else {
                        write!(f, "{var}^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Positive divisors of `n` by trial division, for `|n| < 10^12`.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&n| n > 0 && n < 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    Some(out)
}

pub(crate) fn rat_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division when numerator or denominator overflow
        let n = c.numer().bits() as i64;
        let d = c.denom().bits() as i64;
        let shift = n - d;
        let scaled = if shift > 0 {
            BigRational::new(c.numer().clone(), c.denom() << (shift as usize))
        } else {
            BigRational::new(c.numer() << ((-shift) as usize), c.denom().clone())
        };
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with("q", f)
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, BigRational::zero());
        for (a, b) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
