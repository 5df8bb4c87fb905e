//! Norm experiments on numeric matrices: operator norms, conjugation growth
//! and nilpotency, and centrality of powers at roots of unity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::pbw::Uq;
use crate::scalars::{Field, NumericScalar};

/// Relative stopping tolerance of the power iteration.
pub const NORM_TOLERANCE: f64 = 1e-10;
pub const NORM_MAX_ITER: usize = 100_000;
/// Matrices whose largest entry is below this are treated as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;
/// Tolerance for `a c a^-1 = gamma c`.
pub const CONJUGATION_TOLERANCE: f64 = 1e-9;
pub const CENTER_TOLERANCE: f64 = 1e-9;

struct Sparse {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl Sparse {
    fn new(m: &Matrix<NumericScalar>) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.rows() {
            for (j, x) in m.row(i).iter().enumerate() {
                if !x.is_zero() {
                    entries.push((i, j, x.value()));
                }
            }
        }
        Sparse { rows: m.rows(), cols: m.cols(), entries }
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.rows];
        for &(i, j, a) in &self.entries {
            y[i] += a * x[j];
        }
        y
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.cols];
        for &(i, j, a) in &self.entries {
            x[j] += a.conj() * y[i];
        }
        x
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value, by power iteration on `A^* A`.
pub fn operator_norm(m: &Matrix<NumericScalar>) -> Result<f64> {
    let a = Sparse::new(m);
    if a.entries.is_empty() {
        return Ok(0.0);
    }
    // deterministic start with no special alignment to the coordinate axes
    let mut x: Vec<Complex64> =
        (0..a.cols).map(|i| Complex64::new(1.0 + ((i as f64) * 0.618_033_988_7).fract(), 0.0)).collect();
    let n0 = norm2(&x);
    x.iter_mut().for_each(|z| *z /= n0);
    let mut prev = 0.0;
    for _ in 0..NORM_MAX_ITER {
        let y = a.apply(&x);
        let est = norm2(&y);
        let z = a.apply_adjoint(&y);
        let nz = norm2(&z);
        if !est.is_finite() || !nz.is_finite() {
            return Err(Error::NonFinite("operator norm iteration".into()));
        }
        if nz == 0.0 {
            return Ok(est);
        }
        if (est - prev).abs() <= NORM_TOLERANCE * est {
            return Ok(est);
        }
        prev = est;
        x = z.into_iter().map(|v| v / nz).collect();
    }
    Err(Error::NoConvergence(NORM_MAX_ITER))
}

/// One recorded power of `c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthStep {
    pub n: u32,
    /// `||c^n||`
    pub norm_cn: f64,
    /// `|gamma|^n`
    pub gamma_pow: f64,
    /// `||a|| ||c^n|| ||a^-1||`
    pub bound: f64,
    /// `|gamma|^n <= ||a|| ||a^-1||`, with relative slack `1e-6`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthTrace {
    pub gamma: NumericScalar,
    pub norm_a: f64,
    pub norm_a_inv: f64,
    pub steps: Vec<GrowthStep>,
    /// First `n` with `c^n = 0`, if reached within `nmax`.
    pub vanishes_at: Option<u32>,
}

impl GrowthTrace {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    /// Largest `|gamma|^n / (||a|| ||a^-1||)` over the recorded steps.
    pub fn worst_ratio(&self) -> f64 {
        let cond = self.norm_a * self.norm_a_inv;
        self.steps.iter().map(|s| s.gamma_pow / cond).fold(0.0, f64::max)
    }
}

/// Tracks `|gamma|^n` against `||a|| ||a^-1||` for the powers `c^n != 0`,
/// given `a c a^-1 = gamma c`.
pub fn conjugation_growth(
    a: &Matrix<NumericScalar>,
    c: &Matrix<NumericScalar>,
    gamma: NumericScalar,
    nmax: u32,
) -> Result<GrowthTrace> {
    if !a.is_square() || a.rows() != c.rows() || !c.is_square() {
        return Err(Error::Precondition("a and c must be square of the same size".into()));
    }
    let ainv = a.inverse().ok_or_else(|| Error::Precondition("a is not invertible".into()))?;
    let defect = a.mul(c).mul(&ainv).sub(&c.scale(&gamma)).max_abs();
    if defect > CONJUGATION_TOLERANCE * c.max_abs().max(1.0) {
        return Err(Error::Precondition(format!("a c a^-1 differs from gamma c by {defect:e}")));
    }
    let norm_a = operator_norm(a)?;
    let norm_a_inv = operator_norm(&ainv)?;
    let cond = norm_a * norm_a_inv;
    let g = gamma.norm();
    let mut steps = Vec::new();
    let mut vanishes_at = None;
    let mut cn = c.clone();
    for n in 1..=nmax {
        if n > 1 {
            cn = cn.mul(c);
        }
        if cn.max_abs() < ZERO_THRESHOLD {
            vanishes_at = Some(n);
            break;
        }
        let norm_cn = operator_norm(&cn)?;
        let gamma_pow = g.powi(n as i32);
        steps.push(GrowthStep { n, norm_cn, gamma_pow, bound: cond * norm_cn, holds: gamma_pow <= cond * (1.0 + 1e-6) });
    }
    Ok(GrowthTrace { gamma, norm_a, norm_a_inv, steps, vanishes_at })
}

/// Least `n` with `c^n = 0` (largest entry below [`ZERO_THRESHOLD`]), or
/// `None` when `c^dim != 0`.
pub fn nilpotency_index(c: &Matrix<NumericScalar>) -> Option<u32> {
    let mut p = c.clone();
    for n in 1..=c.rows().max(1) as u32 {
        if n > 1 {
            p = p.mul(c);
        }
        if p.max_abs() < ZERO_THRESHOLD {
            return Some(n);
        }
    }
    None
}

/// Exponent `s` with `E^s, F^s, K^s` central at a primitive `d`-th root.
pub fn center_exponent(d: u32) -> u32 {
    if d % 2 == 1 {
        d
    } else {
        d / 2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterEntry {
    pub element: String,
    pub expected_central: bool,
    pub central: bool,
}

impl CenterEntry {
    pub fn passed(&self) -> bool {
        self.expected_central == self.central
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterReport {
    pub d: u32,
    pub s: u32,
    pub q: NumericScalar,
    pub entries: Vec<CenterEntry>,
}

impl CenterReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(CenterEntry::passed)
    }
}

/// At `q = exp(2 pi i / d)`, checks that `E^s`, `F^s`, `K^s` are central and
/// that `E`, `F`, `K` are not.
pub fn root_unity_center_check(d: u32) -> Result<CenterReport> {
    if d < 3 {
        return Err(Error::Domain(format!("need d >= 3 so that q^2 != 1 (got d = {d})")));
    }
    let q = NumericScalar::root_of_unity(d);
    let uq = Uq::numeric(q, CENTER_TOLERANCE)?;
    let s = center_exponent(d);
    let mut entries = Vec::new();
    for (name, g) in [("E", uq.e()), ("F", uq.f()), ("K", uq.k())] {
        entries.push(CenterEntry {
            element: format!("{name}^{s}"),
            expected_central: true,
            central: uq.is_central(&g.pow(s)?, CENTER_TOLERANCE)?,
        });
        entries.push(CenterEntry {
            element: name.to_string(),
            expected_central: false,
            central: uq.is_central(&g, CENTER_TOLERANCE)?,
        });
    }
    Ok(CenterReport { d, s, q, entries })
}
