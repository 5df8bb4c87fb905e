//! A nonzero Laurent polynomial in `K` lying in the two-sided ideal generated
//! by `E^m`, together with a certificate that can be re-checked from scratch.
//!
//! With `[E^n, F] = E^(n-1) P_n` and `P_n = t_n K - s_n K^-1`, the recursion is
//!
//! ```text
//! R_(m-1) = P_m
//! R_(n-1) = (a_n K^2k - b_n K^-2k) R_n sigma^-1(R_n),   k = 2^(m-n), a_n = t_n^2k, b_n = s_n^2k
//! ```
//!
//! and the factor `a_n K^2k - b_n K^-2k = P_n Q_n` splits by the geometric sum
//! `x^2k - y^2k = (x - y) sum x^(2k-1-i) y^i` with `x = t_n K`, `y = s_n K^-1`.
//! Each level then satisfies the chain identity
//!
//! ```text
//! E^(n-1) R_(n-1) = (E^n R_n sigma(R_n) F - F E^n R_n sigma^-1(R_n)) Q_n
//! ```
//!
//! whose right side lies in the ideal generated by `E^n R_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pbw::{LaurentPoly, PbwElement, Uq};
use crate::scalars::{Field, NumericScalar, QScalar};

/// Default upper bound on `m`; coefficient size grows doubly exponentially.
pub const DEFAULT_MAX_M: u32 = 6;

/// Searched orders when refusing roots of unity at a numeric `q`.
const ROOT_SEARCH_ORDER: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de> + Field"))]
pub struct WitnessLevel<C> {
    /// This record holds `R_n`.
    pub n: u32,
    pub r: LaurentPoly<C>,
    /// `P_(n+1)`, the commutator polynomial of the step that produced `R_n`.
    pub p: LaurentPoly<C>,
    /// `Q_(n+1)`; absent at the top level where `R_(m-1) = P_m`.
    pub cofactor: Option<LaurentPoly<C>>,
    pub k: Option<u64>,
    pub alpha: Option<C>,
    pub beta: Option<C>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de> + Field"))]
pub struct WitnessCertificate<C> {
    pub m: u32,
    /// Levels `n = m-1, m-2, ..., 0`.
    pub levels: Vec<WitnessLevel<C>>,
    pub derivation: String,
}

const DERIVATION: &str = "R_(m-1) = P_m; R_(n-1) = (alpha_n K^2k - beta_n K^-2k) R_n sigma^-1(R_n) with k = 2^(m-n), \
alpha_n = t_n^2k, beta_n = s_n^2k; alpha_n K^2k - beta_n K^-2k = P_n Q_n; \
E^(n-1) R_(n-1) = (E^n R_n sigma(R_n) F - F E^n R_n sigma^-1(R_n)) Q_n";

impl<C: Field> WitnessCertificate<C> {
    /// `R_0`, the witness itself.
    pub fn witness(&self) -> Option<&LaurentPoly<C>> {
        self.levels.last().map(|l| &l.r)
    }
}

impl WitnessCertificate<QScalar> {
    /// Evaluates every stored scalar at a numeric `q`.
    pub fn specialize(&self, qval: NumericScalar) -> Result<WitnessCertificate<NumericScalar>> {
        let opt = |x: &Option<LaurentPoly<QScalar>>| x.as_ref().map(|p| p.specialize(qval)).transpose();
        let opt_s = |x: &Option<QScalar>| x.as_ref().map(|c| c.specialize(qval)).transpose();
        let levels = self
            .levels
            .iter()
            .map(|l| {
                Ok(WitnessLevel {
                    n: l.n,
                    r: l.r.specialize(qval)?,
                    p: l.p.specialize(qval)?,
                    cofactor: opt(&l.cofactor)?,
                    k: l.k,
                    alpha: opt_s(&l.alpha)?,
                    beta: opt_s(&l.beta)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(WitnessCertificate { m: self.m, levels, derivation: self.derivation.clone() })
    }
}

/// Which check failed, and where.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFailure {
    pub level: Option<u32>,
    pub clause: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub ok: bool,
    pub levels_checked: usize,
    pub failure: Option<WitnessFailure>,
}

/// Geometric-sum cofactor: `(x^2k - y^2k) / (x - y)` with `x = tK`, `y = sK^-1`.
pub fn geometric_cofactor<C: Field>(t: &C, s: &C, k: u64) -> LaurentPoly<C> {
    let two_k = 2 * k as i64;
    LaurentPoly::from_terms((0..two_k).map(|i| {
        let c = t.powi(two_k - 1 - i).expect("power").times(&s.powi(i).expect("power"));
        (two_k - 1 - 2 * i, c)
    }))
}

fn binomial_factor<C: Field>(alpha: &C, beta: &C, k: u64) -> Result<LaurentPoly<C>> {
    let e = crate::pbw::check_exponent(2 * k as i128)?;
    Ok(LaurentPoly::from_terms([(e, alpha.clone()), (-e, beta.negate())]))
}

/// Builds the certificate for `m` in the given algebra. `max_m` guards size.
pub fn build_witness_in<C: Field>(uq: &Uq<C>, m: u32, max_m: u32) -> Result<WitnessCertificate<C>> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    if m > max_m {
        return Err(Error::SizeGuard(format!("m = {m} exceeds the configured maximum {max_m}")));
    }
    let q = uq.q();
    let top_p = uq.p_poly(m)?;
    let mut levels = vec![WitnessLevel {
        n: m - 1,
        r: top_p.clone(),
        p: top_p,
        cofactor: None,
        k: None,
        alpha: None,
        beta: None,
    }];
    for n in (1..m).rev() {
        let k = 1u64 << (m - n);
        let (t, s) = uq.em_f_coeffs(n)?;
        let alpha = t.powi(2 * k as i64).expect("power");
        let beta = s.powi(2 * k as i64).expect("power");
        let r_n = &levels.last().expect("nonempty").r;
        let twisted = r_n.sigma_pow(-1, q)?;
        let r_next = binomial_factor(&alpha, &beta, k)?.mul(r_n)?.mul(&twisted)?;
        if r_next.is_zero() {
            return Err(Error::Consistency(format!("R_{} vanished", n - 1)));
        }
        levels.push(WitnessLevel {
            n: n - 1,
            r: r_next,
            p: LaurentPoly::from_terms([(1, t.clone()), (-1, s.negate())]),
            cofactor: Some(geometric_cofactor(&t, &s, k)),
            k: Some(k),
            alpha: Some(alpha),
            beta: Some(beta),
        });
    }
    Ok(WitnessCertificate { m, levels, derivation: DERIVATION.to_string() })
}

/// Symbolic certificate with `q` formal.
pub fn build_witness(m: u32) -> Result<WitnessCertificate<QScalar>> {
    build_witness_in(&Uq::symbolic(), m, DEFAULT_MAX_M)
}

/// Numeric certificate at a concrete `q`; refuses roots of unity.
pub fn build_witness_at(qval: NumericScalar, m: u32, tol: f64) -> Result<WitnessCertificate<NumericScalar>> {
    if let Some(d) = qval.root_of_unity_order(ROOT_SEARCH_ORDER, tol) {
        return Err(Error::WitnessRefused(format!("q = {qval} is a root of unity of order {d}")));
    }
    let uq = Uq::numeric(qval, tol)?;
    build_witness_in(&uq, m, DEFAULT_MAX_M)
}

struct Checker<'a, C> {
    uq: &'a Uq<C>,
    tol: f64,
}

impl<C: Field> Checker<'_, C> {
    fn same_laurent(&self, a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> bool {
        let d = a.sub(b);
        if C::EXACT {
            return d.is_zero();
        }
        let scale = a.terms().values().chain(b.terms().values()).map(Field::magnitude).fold(1.0, f64::max);
        d.terms().values().all(|c| c.magnitude() <= self.tol * scale)
    }

    fn same_pbw(&self, a: &PbwElement<C>, b: &PbwElement<C>) -> Result<bool> {
        let d = a.sub(b)?;
        let scale = a.max_coeff().max(b.max_coeff()).max(1.0);
        Ok(d.is_negligible(self.tol * scale))
    }

    fn same_scalar(&self, a: &C, b: &C) -> bool {
        if C::EXACT {
            a == b
        } else {
            a.minus(b).magnitude() <= self.tol * a.magnitude().max(b.magnitude()).max(1.0)
        }
    }
}

/// Re-derives every clause of the certificate in the given algebra.
///
/// Clauses: `structure` (levels present and indexed), `nonzero` (`R_0`,
/// checked first), `p` (matches the
/// commutator), `top` (`R_(m-1) = P_m`), `coefficients` (`k`, alpha, beta),
/// `factorization` (`P Q`), `recursion` (`R_(n-1)` as a product), `chain`
/// (the ideal-membership identity in the algebra).
pub fn verify_witness_in<C: Field>(uq: &Uq<C>, cert: &WitnessCertificate<C>, tol: f64) -> Result<WitnessReport> {
    let ck = Checker { uq, tol };
    let fail = |level: Option<u32>, clause: &str, detail: String, checked: usize| WitnessReport {
        ok: false,
        levels_checked: checked,
        failure: Some(WitnessFailure { level, clause: clause.to_string(), detail }),
    };
    let m = cert.m;
    if m == 0 || cert.levels.len() != m as usize {
        return Ok(fail(None, "structure", format!("expected {m} levels, found {}", cert.levels.len()), 0));
    }
    for (i, l) in cert.levels.iter().enumerate() {
        if l.n != m - 1 - i as u32 {
            return Ok(fail(Some(l.n), "structure", format!("level {i} is labelled n = {}", l.n), i));
        }
    }
    let r0 = cert.witness().expect("levels nonempty");
    let nonzero = if C::EXACT { !r0.is_zero() } else { r0.terms().values().any(|c| c.magnitude() > tol) };
    if !nonzero {
        return Ok(fail(Some(0), "nonzero", "R_0 vanishes".into(), 0));
    }
    let q = ck.uq.q().clone();
    let e_pow = |n: u32| ck.uq.mono(0, 0, n);
    let f = ck.uq.f();

    for (i, l) in cert.levels.iter().enumerate() {
        let step = l.n + 1;
        let p = ck.uq.p_poly(step)?;
        if !ck.same_laurent(&p, &l.p) {
            return Ok(fail(Some(l.n), "p", format!("P_{step} should be {p}, found {}", l.p), i));
        }
        if i == 0 {
            if !ck.same_laurent(&l.r, &l.p) {
                return Ok(fail(Some(l.n), "top", format!("R_{} differs from P_{m}", l.n), i));
            }
            let lhs = e_pow(m - 1).mul(&ck.uq.laurent(&l.r))?;
            let rhs = e_pow(m).commutator(&f)?;
            if !ck.same_pbw(&lhs, &rhs)? {
                return Ok(fail(Some(l.n), "chain", format!("E^{} R_{} != [E^{m}, F]", m - 1, l.n), i));
            }
            continue;
        }
        let (Some(k), Some(alpha), Some(beta), Some(cof)) = (l.k, &l.alpha, &l.beta, &l.cofactor) else {
            return Ok(fail(Some(l.n), "structure", "missing k, alpha, beta or Q".into(), i));
        };
        let (t, s) = ck.uq.em_f_coeffs(step)?;
        let want_k = 1u64 << (m - step);
        let want_a = t.powi(2 * k as i64).expect("power");
        let want_b = s.powi(2 * k as i64).expect("power");
        if k != want_k || !ck.same_scalar(alpha, &want_a) || !ck.same_scalar(beta, &want_b) {
            return Ok(fail(Some(l.n), "coefficients", format!("k = {k}, expected {want_k}; alpha/beta checked"), i));
        }
        let factor = binomial_factor(alpha, beta, k)?;
        if !ck.same_laurent(&factor, &l.p.mul(cof)?) {
            return Ok(fail(Some(l.n), "factorization", format!("alpha K^{0} - beta K^-{0} != P_{step} Q_{step}", 2 * k), i));
        }
        let prev = &cert.levels[i - 1].r;
        let r_expect = factor.mul(prev)?.mul(&prev.sigma_pow(-1, &q)?)?;
        if !ck.same_laurent(&r_expect, &l.r) {
            return Ok(fail(Some(l.n), "recursion", format!("R_{} is not the stated product", l.n), i));
        }
        // E^(n-1) R_(n-1) = (E^n R_n sigma(R_n) F - F E^n R_n sigma^-1(R_n)) Q_n, with n = step
        let en_rn = e_pow(step).mul(&ck.uq.laurent(prev))?;
        let left = en_rn.mul(&ck.uq.laurent(&prev.sigma_pow(1, &q)?))?.mul(&f)?;
        let right = f.mul(&en_rn)?.mul(&ck.uq.laurent(&prev.sigma_pow(-1, &q)?))?;
        let rhs = left.sub(&right)?.mul(&ck.uq.laurent(cof))?;
        let lhs = e_pow(l.n).mul(&ck.uq.laurent(&l.r))?;
        if !ck.same_pbw(&lhs, &rhs)? {
            return Ok(fail(Some(l.n), "chain", format!("E^{} R_{} differs from the ideal expression", l.n, l.n), i));
        }
    }
    Ok(WitnessReport { ok: true, levels_checked: cert.levels.len(), failure: None })
}

/// Exact verification of a symbolic certificate.
pub fn verify_witness(cert: &WitnessCertificate<QScalar>) -> Result<WitnessReport> {
    verify_witness_in(&Uq::symbolic(), cert, 0.0)
}
