//! Finite-dimensional representations of `U_q(sl2)` and of its h-adic form:
//! builders, relation checks, Schur-type invariants, decomposition and the
//! finite-stage envelope model.

mod decompose;
mod envelope;
mod schur;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixJson};
use crate::scalars::{q_int, q_minus_qinv, ExtendedWeight, Field, NumericScalar, QScalar};

pub use decompose::{decompose, weight_label};
pub use envelope::{envelope_eval, separation_profile, separation_rank, EnvelopeBlock, SeparationProfile, SeparationRank};
pub use schur::{casimir_action, casimir_value, commutant_dim, intertwiner_dim};

fn check_eps(eps: i8) -> Result<()> {
    if eps == 1 || eps == -1 {
        Ok(())
    } else {
        Err(Error::Domain(format!("eps must be +1 or -1, got {eps}")))
    }
}

/// Label `(n, eps)` of the `(n+1)`-dimensional module `T_(n,eps)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct RepLabelQ {
    pub n: u32,
    pub eps: i8,
}

impl RepLabelQ {
    pub fn new(n: u32, eps: i8) -> Result<Self> {
        check_eps(eps)?;
        Ok(RepLabelQ { n, eps })
    }

    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }
}

impl fmt::Display for RepLabelQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({}, {:+})", self.n, self.eps)
    }
}

/// Label `(n, k, eps)` of the h-adic module `T_(n,k,eps)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct RepLabelHbar {
    pub n: u32,
    pub k: i64,
    pub eps: i8,
}

impl RepLabelHbar {
    pub fn new(n: u32, k: i64, eps: i8) -> Result<Self> {
        check_eps(eps)?;
        Ok(RepLabelHbar { n, k, eps })
    }

    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }

    /// The imaginary offset `v` with `r_(k,eps) = v pi i / hbar`.
    pub fn twist(&self) -> i64 {
        if self.eps == 1 {
            2 * self.k
        } else {
            2 * self.k + 1
        }
    }
}

impl fmt::Display for RepLabelHbar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({}, {}, {:+})", self.n, self.k, self.eps)
    }
}

/// `H = U + V * pi * i / hbar` with rational matrices `U` and `V`.
///
/// Keeping both parts as matrices (rather than a diagonal of weights) lets a
/// module be conjugated by an arbitrary basis change and still be decomposed
/// exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct HPart {
    pub u: Matrix<QScalar>,
    pub v: Matrix<QScalar>,
}

impl HPart {
    pub fn diagonal(weights: &[ExtendedWeight]) -> Self {
        HPart {
            u: Matrix::diagonal(&weights.iter().map(|w| QScalar::rational(w.u.clone())).collect::<Vec<_>>()),
            v: Matrix::diagonal(&weights.iter().map(|w| QScalar::rational(w.v.clone())).collect::<Vec<_>>()),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.u.is_diagonal() && self.v.is_diagonal()
    }

    /// Diagonal entries as extended weights; errors if `H` is not diagonal.
    pub fn weights(&self) -> Result<Vec<ExtendedWeight>> {
        if !self.is_diagonal() {
            return Err(Error::Domain("H is not diagonal in this basis".into()));
        }
        self.u
            .diag()
            .iter()
            .zip(self.v.diag())
            .map(|(u, v)| match (u.as_rational(), v.as_rational()) {
                (Some(u), Some(v)) => Ok(ExtendedWeight::new(u, v)),
                _ => Err(Error::Domain("H entries must be rational constants".into())),
            })
            .collect()
    }

    fn conjugate(&self, p: &Matrix<QScalar>, pinv: &Matrix<QScalar>) -> HPart {
        HPart { u: pinv.mul(&self.u).mul(p), v: pinv.mul(&self.v).mul(p) }
    }
}

/// Matrices of `E`, `F`, `K` (and optionally `H`) on a common basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleRep<C> {
    pub q: C,
    pub e: Matrix<C>,
    pub f: Matrix<C>,
    pub k: Matrix<C>,
    pub h: Option<HPart>,
}

impl<C: Field> ModuleRep<C> {
    pub fn dim(&self) -> usize {
        self.e.rows()
    }

    pub fn is_hbar(&self) -> bool {
        self.h.is_some()
    }

    /// `exp(hbar H)`, entrywise `(-1)^v q^u` on a diagonal `H`.
    pub fn exp_h(&self) -> Result<Matrix<C>> {
        let h = self.h.as_ref().ok_or_else(|| Error::Domain("module has no H".into()))?;
        let diag = h
            .weights()?
            .iter()
            .map(|w| C::from_qscalar(&w.exp_hbar()?, &self.q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::diagonal(&diag))
    }

    /// Generators used for commutation tests: `E, F, K`, or `E, F, U, V` when
    /// `H` is present.
    pub(crate) fn generators(&self) -> Result<Vec<Matrix<C>>> {
        let mut out = vec![self.e.clone(), self.f.clone()];
        match &self.h {
            None => out.push(self.k.clone()),
            Some(h) => {
                out.push(embed_matrix(&h.u, &self.q)?);
                out.push(embed_matrix(&h.v, &self.q)?);
            }
        }
        Ok(out)
    }

    pub fn direct_sum(parts: &[&ModuleRep<C>]) -> Result<ModuleRep<C>> {
        let first = parts.first().ok_or_else(|| Error::Domain("empty direct sum".into()))?;
        if parts.iter().any(|p| p.q != first.q) {
            return Err(Error::ModeMismatch { left: first.q.to_string(), right: "another q".into() });
        }
        let all_h = parts.iter().all(|p| p.h.is_some());
        if !all_h && parts.iter().any(|p| p.h.is_some()) {
            return Err(Error::Domain("cannot mix modules with and without H".into()));
        }
        let sum = |get: fn(&ModuleRep<C>) -> &Matrix<C>| Matrix::direct_sum(&parts.iter().map(|p| get(p)).collect::<Vec<_>>());
        let h = all_h.then(|| {
            let hs: Vec<&HPart> = parts.iter().map(|p| p.h.as_ref().expect("checked")).collect();
            HPart {
                u: Matrix::direct_sum(&hs.iter().map(|h| &h.u).collect::<Vec<_>>()),
                v: Matrix::direct_sum(&hs.iter().map(|h| &h.v).collect::<Vec<_>>()),
            }
        });
        Ok(ModuleRep { q: first.q.clone(), e: sum(|p| &p.e), f: sum(|p| &p.f), k: sum(|p| &p.k), h })
    }
}

impl ModuleRep<QScalar> {
    /// `P^-1 rho P` for an invertible rational `P`.
    pub fn conjugate(&self, p: &Matrix<QScalar>) -> Result<ModuleRep<QScalar>> {
        let pinv = p.inverse().ok_or_else(|| Error::Domain("conjugating matrix is singular".into()))?;
        let c = |m: &Matrix<QScalar>| pinv.mul(m).mul(p);
        Ok(ModuleRep {
            q: self.q.clone(),
            e: c(&self.e),
            f: c(&self.f),
            k: c(&self.k),
            h: self.h.as_ref().map(|h| h.conjugate(p, &pinv)),
        })
    }

    pub fn specialize(&self, qval: NumericScalar) -> Result<ModuleRep<NumericScalar>> {
        Ok(ModuleRep {
            q: qval,
            e: self.e.specialize(qval)?,
            f: self.f.specialize(qval)?,
            k: self.k.specialize(qval)?,
            h: self.h.clone(),
        })
    }
}

pub(crate) fn embed_matrix<C: Field>(m: &Matrix<QScalar>, q: &C) -> Result<Matrix<C>> {
    m.try_map(|x| C::from_qscalar(x, q))
}

fn q_matrices(n: u32, eps: i8) -> (Matrix<QScalar>, Matrix<QScalar>, Matrix<QScalar>) {
    let d = n as usize + 1;
    let s = QScalar::integer(eps as i64);
    let mut e = Matrix::zeros(d, d);
    let mut f = Matrix::zeros(d, d);
    for i in 0..d - 1 {
        e.set(i, i + 1, &s * &q_int(n as i64 - i as i64));
        f.set(i + 1, i, q_int(i as i64 + 1));
    }
    let k = Matrix::diagonal(&(0..d).map(|i| &s * &QScalar::q_pow(n as i64 - 2 * i as i64)).collect::<Vec<_>>());
    (e, f, k)
}

/// `T_(n,eps)`: `E` with superdiagonal `eps [n], eps [n-1], ..., eps`,
/// `F` with subdiagonal `1, [2], ..., [n]`, `K = eps diag(q^n, ..., q^-n)`.
pub fn build_rep_q(label: RepLabelQ) -> Result<ModuleRep<QScalar>> {
    check_eps(label.eps)?;
    let (e, f, k) = q_matrices(label.n, label.eps);
    Ok(ModuleRep { q: QScalar::q(), e, f, k, h: None })
}

/// `T_(n,eps)` with entries in any field, given its value of `q`.
pub fn build_rep_q_in<C: Field>(label: RepLabelQ, q: &C) -> Result<ModuleRep<C>> {
    let r = build_rep_q(label)?;
    Ok(ModuleRep {
        q: q.clone(),
        e: embed_matrix(&r.e, q)?,
        f: embed_matrix(&r.f, q)?,
        k: embed_matrix(&r.k, q)?,
        h: None,
    })
}

/// `T_(n,k,eps)`: `E`, `F` as in `T_(n,eps)`, `H = diag(n - 2i + r_(k,eps))`,
/// and `K = exp(hbar H)`.
pub fn build_rep_hbar(label: RepLabelHbar) -> Result<ModuleRep<QScalar>> {
    check_eps(label.eps)?;
    let (e, f, _) = q_matrices(label.n, label.eps);
    let weights: Vec<ExtendedWeight> = (0..=label.n as i64)
        .map(|i| &ExtendedWeight::integers(label.n as i64 - 2 * i, 0) + &ExtendedWeight::twist(label.k, label.eps))
        .collect();
    let mut rep = ModuleRep { q: QScalar::q(), e, f, k: Matrix::zeros(1, 1), h: Some(HPart::diagonal(&weights)) };
    rep.k = rep.exp_h()?;
    Ok(rep)
}

/// Outcome of one defining relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
    /// Largest residual entry magnitude (0/1 in symbolic mode).
    pub residual_norm: f64,
    /// `rhs - lhs`, row-major.
    pub residual: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn relation<C: Field>(name: &str, lhs: &Matrix<C>, rhs: &Matrix<C>, tol: f64) -> RelationCheck {
    let res = rhs.sub(lhs);
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    let passed = if C::EXACT { res.is_zero() } else { res.max_abs() <= tol * scale };
    RelationCheck { name: name.to_string(), passed, residual_norm: res.max_abs(), residual: MatrixJson::from(&res) }
}

fn failed<C: Field>(name: &str, d: usize) -> RelationCheck {
    RelationCheck {
        name: name.to_string(),
        passed: false,
        residual_norm: f64::INFINITY,
        residual: MatrixJson::from(&Matrix::<C>::zeros(d, d)),
    }
}

/// Checks the defining relations as matrix identities: exactly in symbolic
/// mode, within `tol` (relative to the operand size) numerically.
pub fn check_relations<C: Field>(rep: &ModuleRep<C>, tol: f64) -> Result<RelationReport> {
    let d = rep.dim();
    let q = &rep.q;
    let qinv = q.inverse().ok_or_else(|| Error::Domain("q must be nonzero".into()))?;
    let c0 = q.minus(&qinv).inverse().ok_or_else(|| Error::Domain("q^2 = 1 is excluded".into()))?;
    let mut checks = Vec::new();
    let ef = rep.e.commutator(&rep.f);
    match &rep.h {
        None => {
            let Some(kinv) = rep.k.inverse() else {
                return Ok(RelationReport {
                    checks: ["K E K^-1 = q^2 E", "K F K^-1 = q^-2 F", "[E,F] = (K - K^-1)/(q - q^-1)"]
                        .iter()
                        .map(|n| failed::<C>(n, d))
                        .collect(),
                });
            };
            let q2 = q.times(q);
            let q2inv = qinv.times(&qinv);
            checks.push(relation("K E K^-1 = q^2 E", &rep.k.mul(&rep.e).mul(&kinv), &rep.e.scale(&q2), tol));
            checks.push(relation("K F K^-1 = q^-2 F", &rep.k.mul(&rep.f).mul(&kinv), &rep.f.scale(&q2inv), tol));
            checks.push(relation("[E,F] = (K - K^-1)/(q - q^-1)", &ef, &rep.k.sub(&kinv).scale(&c0), tol));
        }
        Some(h) => {
            let u = embed_matrix(&h.u, q)?;
            let v = embed_matrix(&h.v, q)?;
            let two = C::from_i64(2);
            let zero = Matrix::zeros(d, d);
            // the pi*i/hbar part of [H, X] must vanish separately
            let he = relation("[H,E] = 2E", &u.commutator(&rep.e), &rep.e.scale(&two), tol);
            let he_v = relation("", &v.commutator(&rep.e), &zero, tol);
            let hf = relation("[H,F] = -2F", &u.commutator(&rep.f), &rep.f.scale(&two.negate()), tol);
            let hf_v = relation("", &v.commutator(&rep.f), &zero, tol);
            for (mut a, b) in [(he, he_v), (hf, hf_v)] {
                a.passed &= b.passed;
                a.residual_norm = a.residual_norm.max(b.residual_norm);
                checks.push(a);
            }
            let kh = if h.is_diagonal() { rep.exp_h()? } else { rep.k.clone() };
            let name = "[E,F] = sinh(hbar H)/sinh(hbar)";
            match kh.inverse() {
                Some(khinv) => checks.push(relation(name, &ef, &kh.sub(&khinv).scale(&c0), tol)),
                None => checks.push(failed::<C>(name, d)),
            }
            if h.is_diagonal() {
                checks.push(relation("K = exp(hbar H)", &rep.k, &kh, tol));
            }
        }
    }
    Ok(RelationReport { checks })
}

/// Random invertible integer matrix with entries in `-3..=3`.
pub fn random_invertible(d: usize, rng: &mut impl Rng) -> Matrix<QScalar> {
    loop {
        let m = Matrix::from_fn(d, d, |_, _| QScalar::integer(rng.gen_range(-3..=3)));
        if m.rank(0.0) == d {
            return m;
        }
    }
}

/// `(q^(n+1) + q^-(n+1)) eps / (q - q^-1)^2`, the Casimir value on `T_(n,eps)`.
pub fn casimir_on_label(label: RepLabelQ) -> QScalar {
    let n1 = label.n as i64 + 1;
    let num = &QScalar::integer(label.eps as i64) * &(&QScalar::q_pow(n1) + &QScalar::q_pow(-n1));
    &num / &q_minus_qinv().pow(2).expect("nonzero")
}

#[cfg(test)]
mod tests;
