//! Truncations of the Verma module with highest weight `lambda`.
//!
//! Basis `e_0, e_1, ...` (0-based) with
//!
//! ```text
//! K e_i = lambda q^-2i e_i      F e_i = [i+1] e_(i+1)      E e_(i+1) = -[i]_lambda e_i
//! ```
//!
//! where `[n]_lambda = (q^n lambda^-1 - q^-n lambda)/(q - q^-1)`. The `N`-th
//! truncation keeps `e_0..e_(N-1)` and drops `F e_(N-1)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numerics::operator_norm;
use crate::scalars::{q_int_in, q_int_lambda_in, Field, NumericScalar};

/// Tolerance for a numeric `[n]_lambda` to count as zero.
pub const SCAN_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct VermaTruncation<C> {
    pub lam: C,
    pub q: C,
    pub e: Matrix<C>,
    pub f: Matrix<C>,
    pub k: Matrix<C>,
}

impl<C: Field> VermaTruncation<C> {
    pub fn dim(&self) -> usize {
        self.e.rows()
    }

    /// `[E,F] - (K - K^-1)/(q - q^-1)`; nonzero only at the last diagonal
    /// entry, where the dropped `F e_(N-1)` would have contributed.
    pub fn relation_defect(&self) -> Result<Matrix<C>> {
        let kinv = self.k.inverse().ok_or_else(|| Error::Domain("K is not invertible".into()))?;
        let c0 = self
            .q
            .minus(&self.q.inverse().expect("q nonzero"))
            .inverse()
            .ok_or_else(|| Error::Domain("q^2 = 1 is excluded".into()))?;
        Ok(self.e.commutator(&self.f).sub(&self.k.sub(&kinv).scale(&c0)))
    }

    /// Whether `span{e_start, ..., e_(N-1)}` is invariant under `E`, `F`, `K`.
    pub fn tail_is_invariant(&self, start: usize, tol: f64) -> bool {
        let d = self.dim();
        [&self.e, &self.f, &self.k]
            .iter()
            .all(|m| (start..d).all(|j| (0..start.min(d)).all(|i| m.get(i, j).is_negligible(tol))))
    }
}

/// The `n`-dimensional truncation, `n >= 1`.
pub fn build_verma<C: Field>(lam: &C, q: &C, n: usize) -> Result<VermaTruncation<C>> {
    if lam.is_zero() {
        return Err(Error::Domain("lambda must be nonzero".into()));
    }
    if n == 0 {
        return Err(Error::Domain("truncation dimension must be positive".into()));
    }
    let qm2 = q.powi(-2).ok_or_else(|| Error::Domain("q must be nonzero".into()))?;
    let mut e = Matrix::zeros(n, n);
    let mut f = Matrix::zeros(n, n);
    let mut kd = Vec::with_capacity(n);
    let mut w = lam.clone();
    for i in 0..n {
        kd.push(w.clone());
        w = w.times(&qm2);
        if i + 1 < n {
            e.set(i, i + 1, q_int_lambda_in(i as i64, lam, q)?.negate());
            f.set(i + 1, i, q_int_in(i as i64 + 1, q)?);
        }
    }
    Ok(VermaTruncation { lam: lam.clone(), q: q.clone(), e, f, k: Matrix::diagonal(&kd) })
}

/// Indices `n0` with `[n0]_lambda = 0` among the entries of `E`, each
/// certified by the invariance of `span{e_(n0+1), ...}` in the truncation.
/// Exact in symbolic mode, `|.| < tol` numerically.
pub fn invariant_scan<C: Field>(v: &VermaTruncation<C>, tol: f64) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for n0 in 0..v.dim().saturating_sub(1) {
        if !v.e.get(n0, n0 + 1).is_negligible(tol) {
            continue;
        }
        if !v.tail_is_invariant(n0 + 1, tol) {
            return Err(Error::Consistency(format!("vanishing entry at {n0} without an invariant tail")));
        }
        out.push(n0);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub n: usize,
    pub norm_e: f64,
    pub norm_f: f64,
    pub norm_k: f64,
}

/// Operator 2-norms of the truncations of each requested size.
pub fn norm_growth(lam: NumericScalar, qval: NumericScalar, sizes: &[usize]) -> Result<Vec<NormRow>> {
    sizes
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::Domain(format!("truncation size must be at least 2 (got {n})")));
            }
            let v = build_verma(&lam, &qval, n)?;
            Ok(NormRow { n, norm_e: operator_norm(&v.e)?, norm_f: operator_norm(&v.f)?, norm_k: operator_norm(&v.k)? })
        })
        .collect()
}

/// `(|lambda| + |lambda|^-1) / |q - q^-1|`, which bounds every `|[n]_lambda|`
/// when `|q| = 1`.
pub fn unit_circle_entry_bound(lam: NumericScalar, qval: NumericScalar) -> f64 {
    let l = lam.norm();
    let z = qval.value();
    (l + 1.0 / l) / (z - 1.0 / z).norm()
}

/// CSV with header `N,normE,normF,normK`, 12 significant digits.
pub fn norms_csv(rows: &[NormRow]) -> String {
    let mut out = String::from("N,normE,normF,normK\n");
    for r in rows {
        writeln!(out, "{},{:.11e},{:.11e},{:.11e}", r.n, r.norm_e, r.norm_f, r.norm_k).expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{q_int_lambda, QScalar};

    fn sym(lam: QScalar, n: usize) -> VermaTruncation<QScalar> {
        build_verma(&lam, &QScalar::q(), n).unwrap()
    }

    #[test]
    fn small_truncations() {
        let v = sym(QScalar::one(), 2);
        assert_eq!(v.k, Matrix::diagonal(&[QScalar::one(), QScalar::q_pow(-2)]));
        assert_eq!(v.f.get(1, 0), &QScalar::one());
        // [0]_1 = 0, so the lowest vector is already a singular vector
        assert!(v.e.get(0, 1).is_zero());

        let v = sym(QScalar::q(), 3);
        assert_eq!(v.e.get(0, 1), &QScalar::one());
        assert!(v.e.get(1, 2).is_zero());
    }

    #[test]
    fn superdiagonal_is_shifted_quantum_integer() {
        let lam = QScalar::ratio(3, 2);
        let v = sym(lam.clone(), 4);
        for i in 0..3 {
            assert_eq!(v.e.get(i, i + 1), &-q_int_lambda(i as i64, &lam).unwrap());
        }
    }

    #[test]
    fn rejects_zero_lambda() {
        assert!(build_verma(&QScalar::zero(), &QScalar::q(), 3).is_err());
        assert!(build_verma(&QScalar::one(), &QScalar::q(), 0).is_err());
    }

    #[test]
    fn defect_only_in_corner() {
        for lam in [QScalar::one(), QScalar::ratio(3, 2), QScalar::q_pow(2)] {
            for n in 1..=6 {
                let d = sym(lam.clone(), n).relation_defect().unwrap();
                for i in 0..n {
                    for j in 0..n {
                        if (i, j) != (n - 1, n - 1) {
                            assert!(d.get(i, j).is_zero(), "lam={lam} n={n} ({i},{j})");
                        }
                    }
                }
                // the corner is [N][N-1]_lambda, zero only when lambda = +-q^(N-1)
                let corner = &q_int_lambda(n as i64 - 1, &lam).unwrap() * &crate::scalars::q_int(n as i64);
                assert_eq!(d.get(n - 1, n - 1), &corner);
            }
        }
    }

    #[test]
    fn truncations_are_compatible() {
        let big = sym(QScalar::ratio(5, 3), 7);
        for m in 1..7 {
            let small = sym(QScalar::ratio(5, 3), m);
            let idx: Vec<usize> = (0..m).collect();
            assert_eq!(big.e.select(&idx, &idx), small.e);
            assert_eq!(big.f.select(&idx, &idx), small.f);
            assert_eq!(big.k.select(&idx, &idx), small.k);
        }
    }

    #[test]
    fn scan_finds_highest_weight_quotients() {
        for n0 in 0..=8 {
            for eps in [1, -1] {
                let lam = &QScalar::integer(eps) * &QScalar::q_pow(n0);
                assert_eq!(invariant_scan(&sym(lam, 12), 0.0).unwrap(), vec![n0 as usize]);
            }
        }
        let lam = -&QScalar::q_pow(2);
        assert_eq!(invariant_scan(&sym(lam, 6), 0.0).unwrap(), vec![2]);
    }

    #[test]
    fn generic_numeric_scan_is_empty() {
        let v = build_verma(&NumericScalar::real(1.7), &NumericScalar::unit(1.0), 40).unwrap();
        assert!(invariant_scan(&v, SCAN_TOLERANCE).unwrap().is_empty());
    }

    #[test]
    fn norms_on_unit_circle_stay_bounded() {
        let q = NumericScalar::unit(1.0);
        let lam = NumericScalar::real(1.0);
        let bound = unit_circle_entry_bound(lam, q);
        for row in norm_growth(lam, q, &[25, 50, 100]).unwrap() {
            assert!(row.norm_e <= bound + 1.0, "{row:?}");
            assert!((row.norm_k - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn norms_grow_off_unit_circle() {
        let q = NumericScalar::real(1.1);
        let rows = norm_growth(NumericScalar::real(1.0), q, &[100, 200]).unwrap();
        assert!(rows[1].norm_e / rows[0].norm_e >= 1.1f64.powi(90) / 2.0);
        assert!(rows.iter().all(|r| (r.norm_k - 1.0).abs() < 1e-9));
    }

    #[test]
    fn csv_layout() {
        let csv = norms_csv(&[NormRow { n: 2, norm_e: 1.0, norm_f: 2.5, norm_k: 1.0 / 3.0 }]);
        assert_eq!(csv, "N,normE,normF,normK\n2,1.00000000000e0,2.50000000000e0,3.33333333333e-1\n");
    }
}
