//! PBW normal form for `U_q(sl2)`.
//!
//! Elements are finite sums of `F^r K^j E^s`. Products are computed by
//! multiplying on the right by one generator at a time, each step applying the
//! defining relations
//!
//! ```text
//! K F = q^-2 F K      E K = q^-2 K E      E F = F E + (K - K^-1)/(q - q^-1)
//! ```
//!
//! so every intermediate result is already in normal form. An independent
//! word-rewriting engine lives in [`words`] and is used to cross-check.

mod laurent;
pub mod words;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Generator};
use crate::scalars::{check_q_admissible, q_int, q_minus_qinv, Field, NumericScalar, QScalar};

pub use laurent::LaurentPoly;
pub use words::Letter;

/// Largest absolute exponent accepted anywhere in the algebra.
pub const MAX_EXPONENT: i64 = 1_000_000;

/// Numeric coefficients below this are dropped after every product.
pub const NUMERIC_DUST: f64 = 1e-14;

pub(crate) fn check_exponent(e: i128) -> Result<i64> {
    if e.abs() > MAX_EXPONENT as i128 {
        return Err(Error::ExponentOverflow(e));
    }
    Ok(e as i64)
}

/// The basis element `F^f K^k E^e`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Monomial {
    pub f: u32,
    pub k: i64,
    pub e: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { f: 0, k: 0, e: 0 };

    pub fn new(f: u32, k: i64, e: u32) -> Self {
        Monomial { f, k, e }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.f {
            0 => {}
            1 => parts.push("F".to_string()),
            n => parts.push(format!("F^{n}")),
        }
        match self.k {
            0 => {}
            1 => parts.push("K".to_string()),
            n => parts.push(format!("K^{n}")),
        }
        match self.e {
            0 => {}
            1 => parts.push("E".to_string()),
            n => parts.push(format!("E^{n}")),
        }
        if parts.is_empty() {
            write!(fm, "1")
        } else {
            write!(fm, "{}", parts.join("*"))
        }
    }
}

/// Whether coefficients are formal in `q` or evaluated at a fixed value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraMode {
    Symbolic,
    Numeric { q: String },
}

impl fmt::Display for AlgebraMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraMode::Symbolic => write!(f, "symbolic"),
            AlgebraMode::Numeric { q } => write!(f, "numeric(q = {q})"),
        }
    }
}

/// An element of `U_q(sl2)` in PBW normal form, tagged with its value of `q`.
#[derive(Clone, PartialEq, Debug)]
pub struct PbwElement<C> {
    q: C,
    terms: BTreeMap<Monomial, C>,
}

fn add_term<C: Field>(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&m) {
        Some(old) => {
            *old = old.plus(&c);
            if old.is_zero() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
}

impl<C: Field> PbwElement<C> {
    pub fn zero(q: C) -> Self {
        PbwElement { q, terms: BTreeMap::new() }
    }

    pub fn from_terms(q: C, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut out = Self::zero(q);
        for (m, c) in terms {
            add_term(&mut out.terms, m, c);
        }
        out.drop_dust();
        out
    }

    pub fn monomial(q: C, m: Monomial, c: C) -> Self {
        Self::from_terms(q, [(m, c)])
    }

    pub fn q(&self) -> &C {
        &self.q
    }

    pub fn mode(&self) -> AlgebraMode {
        if C::EXACT {
            AlgebraMode::Symbolic
        } else {
            AlgebraMode::Numeric { q: self.q.to_string() }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn coeff(&self, m: Monomial) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude (0/1 in symbolic mode).
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(Field::magnitude).fold(0.0, f64::max)
    }

    /// Zero in symbolic mode, or every coefficient within `tol` numerically.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(tol))
    }

    fn check_mode(&self, rhs: &Self) -> Result<()> {
        if self.q != rhs.q {
            return Err(Error::ModeMismatch { left: self.q.to_string(), right: rhs.q.to_string() });
        }
        Ok(())
    }

    fn drop_dust(&mut self) {
        if !C::EXACT {
            self.terms.retain(|_, c| c.magnitude() >= NUMERIC_DUST);
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_mode(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            add_term(&mut out.terms, *m, c.clone());
        }
        out.drop_dust();
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().negate())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.q.clone(), self.terms.iter().map(|(m, x)| (*m, x.times(c))))
    }

    /// The product `self * rhs`, in normal form.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_mode(rhs)?;
        let ctx = Ctx::new(&self.q)?;
        let mut out = BTreeMap::new();
        for (mb, cb) in &rhs.terms {
            let mut cur = self.terms.clone();
            for _ in 0..mb.f {
                cur = ctx.times_f(&cur)?;
            }
            if mb.k != 0 {
                cur = ctx.times_k_pow(&cur, mb.k)?;
            }
            for (m, c) in cur {
                let e = check_exponent(m.e as i128 + mb.e as i128)? as u32;
                add_term(&mut out, Monomial { e, ..m }, c.times(cb));
            }
        }
        let mut res = PbwElement { q: self.q.clone(), terms: out };
        res.drop_dust();
        Ok(res)
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::monomial(self.q.clone(), Monomial::ONE, C::one());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl PbwElement<QScalar> {
    pub fn specialize(&self, qval: NumericScalar) -> Result<PbwElement<NumericScalar>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((*m, c.specialize(qval)?));
        }
        Ok(PbwElement::from_terms(qval, terms))
    }
}

impl<C: Field> fmt::Display for PbwElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{{{c}}}")?;
            } else {
                write!(f, "{{{c}}}*{m}")?;
            }
        }
        Ok(())
    }
}

/// One term of a serialized PBW element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PbwTerm {
    pub r: u32,
    pub j: i64,
    pub s: u32,
    pub coeff: String,
}

impl<C: Field> PbwElement<C> {
    pub fn to_json_terms(&self) -> Vec<PbwTerm> {
        self.terms
            .iter()
            .map(|(m, c)| PbwTerm { r: m.f, j: m.k, s: m.e, coeff: c.to_string() })
            .collect()
    }
}

/// Cached powers of `q` used by the right-multiplication steps.
struct Ctx<C> {
    q: C,
    /// `1 / (q - q^-1)`
    c0: C,
}

impl<C: Field> Ctx<C> {
    fn new(q: &C) -> Result<Self> {
        let qinv = q.inverse().ok_or_else(|| Error::Domain("q must be nonzero".into()))?;
        let c0 = q.minus(&qinv).inverse().ok_or_else(|| Error::Domain("q^2 = 1 is excluded".into()))?;
        Ok(Ctx { q: q.clone(), c0 })
    }

    fn q_pow(&self, n: i64) -> C {
        self.q.powi(n).expect("q nonzero")
    }

    /// Right multiplication of a normal-form sum by `F`.
    fn times_f(&self, x: &BTreeMap<Monomial, C>) -> Result<BTreeMap<Monomial, C>> {
        let mut out = BTreeMap::new();
        for (m, c) in x {
            self.mono_times_f(*m, c, &mut out)?;
        }
        Ok(out)
    }

    fn mono_times_f(&self, m: Monomial, c: &C, out: &mut BTreeMap<Monomial, C>) -> Result<()> {
        if m.e == 0 {
            // K^k F = q^-2k F K^k
            let f = check_exponent(m.f as i128 + 1)? as u32;
            let k2 = check_exponent(-2 * m.k as i128)?;
            add_term(out, Monomial { f, ..m }, c.times(&self.q_pow(k2)));
            return Ok(());
        }
        // E^e F = E^(e-1) F E + E^(e-1) (K - K^-1)/(q - q^-1)
        let base = Monomial { e: m.e - 1, ..m };
        let mut tmp = BTreeMap::new();
        self.mono_times_f(base, c, &mut tmp)?;
        for (mm, cc) in tmp {
            add_term(out, Monomial { e: mm.e + 1, ..mm }, cc);
        }
        let shift = 2 * base.e as i64;
        let cc = c.times(&self.c0);
        let kp = check_exponent(base.k as i128 + 1)?;
        let km = check_exponent(base.k as i128 - 1)?;
        // E^(e-1) K = q^(-2(e-1)) K E^(e-1), E^(e-1) K^-1 = q^(2(e-1)) K^-1 E^(e-1)
        add_term(out, Monomial { k: kp, ..base }, cc.times(&self.q_pow(-shift)));
        add_term(out, Monomial { k: km, ..base }, cc.times(&self.q_pow(shift)).negate());
        Ok(())
    }

    /// Right multiplication by `K^j`: `E^e K^j = q^(-2ej) K^j E^e`.
    fn times_k_pow(&self, x: &BTreeMap<Monomial, C>, j: i64) -> Result<BTreeMap<Monomial, C>> {
        let mut out = BTreeMap::new();
        for (m, c) in x {
            let k = check_exponent(m.k as i128 + j as i128)?;
            let e = check_exponent(-2 * m.e as i128 * j as i128)?;
            add_term(&mut out, Monomial { k, ..*m }, c.times(&self.q_pow(e)));
        }
        Ok(out)
    }
}

/// Factory for elements of `U_q(sl2)` at a fixed `q`, symbolic or numeric.
#[derive(Clone, Debug)]
pub struct Uq<C> {
    q: C,
    tol: f64,
}

impl Uq<QScalar> {
    /// The algebra over `Q(q)` with `q` formal.
    pub fn symbolic() -> Self {
        Uq { q: QScalar::q(), tol: 0.0 }
    }
}

impl Uq<NumericScalar> {
    /// The algebra at a concrete `q`; rejects `q = 0` and `q^2 = 1`.
    pub fn numeric(qval: NumericScalar, tol: f64) -> Result<Self> {
        check_q_admissible(qval, tol)?;
        Ok(Uq { q: qval, tol })
    }
}

impl<C: Field> Uq<C> {
    pub fn q(&self) -> &C {
        &self.q
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn mode(&self) -> AlgebraMode {
        self.zero().mode()
    }

    pub fn zero(&self) -> PbwElement<C> {
        PbwElement::zero(self.q.clone())
    }

    pub fn one(&self) -> PbwElement<C> {
        self.scalar(C::one())
    }

    pub fn scalar(&self, c: C) -> PbwElement<C> {
        PbwElement::monomial(self.q.clone(), Monomial::ONE, c)
    }

    pub fn mono(&self, f: u32, k: i64, e: u32) -> PbwElement<C> {
        PbwElement::monomial(self.q.clone(), Monomial::new(f, k, e), C::one())
    }

    pub fn e(&self) -> PbwElement<C> {
        self.mono(0, 0, 1)
    }

    pub fn f(&self) -> PbwElement<C> {
        self.mono(1, 0, 0)
    }

    pub fn k(&self) -> PbwElement<C> {
        self.mono(0, 1, 0)
    }

    pub fn kinv(&self) -> PbwElement<C> {
        self.mono(0, -1, 0)
    }

    /// Embeds a symbolic scalar, specializing it in numeric mode.
    pub fn embed(&self, x: &QScalar) -> Result<C> {
        C::from_qscalar(x, &self.q)
    }

    pub fn laurent(&self, r: &LaurentPoly<C>) -> PbwElement<C> {
        r.to_pbw(&self.q)
    }

    pub fn sigma_pow(&self, r: &LaurentPoly<C>, n: i64) -> Result<LaurentPoly<C>> {
        r.sigma_pow(n, &self.q)
    }

    /// Normal form of an expression tree. `H` is not an element of `U_q(sl2)`.
    pub fn normalize(&self, expr: &Expr) -> Result<PbwElement<C>> {
        match expr {
            Expr::Gen(g) => match g {
                Generator::E => Ok(self.e()),
                Generator::F => Ok(self.f()),
                Generator::K => Ok(self.k()),
                Generator::Kinv => Ok(self.kinv()),
                Generator::H => Err(Error::Domain("H belongs to the h-adic algebra, not U_q(sl2)".into())),
            },
            Expr::Scalar(s) => Ok(self.scalar(self.embed(s)?)),
            Expr::Add(a, b) => self.normalize(a)?.add(&self.normalize(b)?),
            Expr::Sub(a, b) => self.normalize(a)?.sub(&self.normalize(b)?),
            Expr::Neg(a) => Ok(self.normalize(a)?.neg()),
            Expr::Mul(a, b) => self.normalize(a)?.mul(&self.normalize(b)?),
            Expr::Bracket(a, b) => self.normalize(a)?.commutator(&self.normalize(b)?),
            Expr::Pow(a, n) => {
                let base = self.normalize(a)?;
                if *n >= 0 {
                    return base.pow(check_exponent(*n as i128)? as u32);
                }
                // only K-monomials and nonzero scalars are invertible here
                let inv = match base.terms().iter().collect::<Vec<_>>().as_slice() {
                    [(m, c)] if m.f == 0 && m.e == 0 => {
                        let ci = c.inverse().ok_or_else(|| Error::Domain("zero has no inverse".into()))?;
                        PbwElement::monomial(self.q.clone(), Monomial::new(0, check_exponent(-(m.k as i128))?, 0), ci)
                    }
                    _ => return Err(Error::Domain(format!("negative power of non-invertible element {base}"))),
                };
                inv.pow(check_exponent(-(*n as i128))? as u32)
            }
        }
    }

    /// `[E^m, F]` read off as `E^(m-1) (t K - s K^-1)`, returning `(t, s)`.
    pub fn em_f_coeffs(&self, m: u32) -> Result<(C, C)> {
        if m == 0 {
            return Err(Error::Domain("m must be positive".into()));
        }
        let em = self.mono(0, 0, m);
        let c = em.commutator(&self.f())?;
        let up = Monomial::new(0, 1, m - 1);
        let down = Monomial::new(0, -1, m - 1);
        if c.terms().keys().any(|k| *k != up && *k != down) {
            return Err(Error::Consistency(format!("[E^{m}, F] has unexpected shape: {c}")));
        }
        // E^(m-1) K = q^(-2(m-1)) K E^(m-1)
        let shift = 2 * (m as i64 - 1);
        let t = c.coeff(up).times(&self.q.powi(shift).expect("q nonzero"));
        let s = c.coeff(down).times(&self.q.powi(-shift).expect("q nonzero")).negate();
        if t.is_zero() || s.is_zero() {
            return Err(Error::Consistency(format!("[E^{m}, F] has a vanishing coefficient: {c}")));
        }
        Ok((t, s))
    }

    /// `P_m = t_m K - s_m K^-1`, so that `[E^m, F] = E^(m-1) P_m`.
    pub fn p_poly(&self, m: u32) -> Result<LaurentPoly<C>> {
        let (t, s) = self.em_f_coeffs(m)?;
        Ok(LaurentPoly::from_terms([(1, t), (-1, s.negate())]))
    }

    /// The Casimir element `EF + (q^-1 K + q K^-1)/(q - q^-1)^2`.
    pub fn casimir(&self) -> Result<PbwElement<C>> {
        let ef = self.e().mul(&self.f())?;
        let c0 = self.embed(&q_minus_qinv().powi(-2).expect("nonzero"))?;
        let qinv = self.embed(&QScalar::q_pow(-1))?;
        let lp = LaurentPoly::from_terms([(1, qinv.times(&c0)), (-1, self.q.times(&c0))]);
        ef.add(&self.laurent(&lp))
    }

    /// Commutes with `E`, `F` and `K` (exactly, or within `tol` relative to
    /// the largest coefficient of `x` in numeric mode).
    pub fn is_central(&self, x: &PbwElement<C>, tol: f64) -> Result<bool> {
        let scale = x.max_coeff().max(1.0);
        for g in [self.e(), self.f(), self.k()] {
            if !x.commutator(&g)?.is_negligible(tol * scale) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(t_m, s_m)` in the closed form `q^(+-(m-1)) [m]_q / (q - q^-1)`.
pub fn em_f_closed_form(m: i64) -> (QScalar, QScalar) {
    let base = &q_int(m) / &q_minus_qinv();
    (&QScalar::q_pow(m - 1) * &base, &QScalar::q_pow(1 - m) * &base)
}

/// `q^-1 (q^-2m - 1) / (q^-2 - 1)^2`, an expression sometimes quoted for
/// `s_m`. It equals `-s_m` for every `m`; see [`s_sign_diagnostic`].
pub fn em_f_alternate_s(m: i64) -> QScalar {
    let one = QScalar::integer(1);
    let den = (&QScalar::q_pow(-2) - &one).pow(2).expect("nonzero");
    &(&QScalar::q_pow(-1) * &(&QScalar::q_pow(-2 * m) - &one)) / &den
}

/// Compares the normalization-derived `s_m` with [`em_f_alternate_s`].
/// Returns `+1` if they agree, `-1` if they differ exactly by sign, `0` otherwise.
pub fn s_sign_diagnostic(m: u32) -> Result<i8> {
    let (_, s) = Uq::symbolic().em_f_coeffs(m)?;
    let alt = em_f_alternate_s(m as i64);
    Ok(if s == alt {
        1
    } else if s == -alt {
        -1
    } else {
        0
    })
}

#[cfg(test)]
mod tests;
