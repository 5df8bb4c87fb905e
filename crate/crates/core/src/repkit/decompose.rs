use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{ModuleRep, RepLabelHbar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{ExtendedWeight, QPoly, QScalar};

fn rational_entries(m: &Matrix<QScalar>, what: &str) -> Result<()> {
    if m.entries().iter().all(QScalar::is_constant) {
        Ok(())
    } else {
        Err(Error::Decomposition(format!("{what} must have rational entries")))
    }
}

fn rational_eigenvalues(m: &Matrix<QScalar>, what: &str) -> Result<Vec<BigRational>> {
    let coeffs: Vec<BigRational> = m.charpoly().iter().map(|c| c.as_rational().expect("rational matrix")).collect();
    QPoly::from_coeffs(coeffs)
        .rational_roots()
        .ok_or_else(|| Error::Decomposition(format!("characteristic polynomial of {what} is too large to factor")))
}

fn shifted(m: &Matrix<QScalar>, lam: &BigRational) -> Matrix<QScalar> {
    let mut out = m.clone();
    let l = QScalar::rational(lam.clone());
    for i in 0..m.rows() {
        out.set(i, i, m.get(i, i) - &l);
    }
    out
}

fn stack(blocks: &[&Matrix<QScalar>]) -> Matrix<QScalar> {
    let rows: Vec<Vec<QScalar>> = blocks.iter().flat_map(|b| (0..b.rows()).map(|i| b.row(i).to_vec())).collect();
    Matrix::from_rows(rows)
}

/// Label of the simple module whose highest weight is `w` and whose dimension
/// is `n + 1`, or an error when `w` is not of the form `n + r_(k,eps)`.
pub fn weight_label(w: &ExtendedWeight, n: u32) -> Result<RepLabelHbar> {
    let bad = || Error::Decomposition(format!("highest weight {w} is not of the form n + r(k, eps) with n = {n}"));
    if w.u != BigRational::from_integer(n.into()) || !w.v.is_integer() {
        return Err(bad());
    }
    let v = w.v.to_integer().to_i64().ok_or_else(bad)?;
    let (k, eps) = if v.rem_euclid(2) == 0 { (v.div_euclid(2), 1) } else { ((v - 1).div_euclid(2), -1) };
    RepLabelHbar::new(n, k, eps)
}

/// Splits a finite-dimensional module with `H` into simple modules
/// `T_(n,k,eps)`, returning their labels (sorted, with multiplicity).
///
/// The module may be presented in any basis. `H` has to be diagonalizable
/// with rational eigenvalues in both parts, and every highest-weight vector
/// has to generate a simple module of the admissible shape.
pub fn decompose(rep: &ModuleRep<QScalar>) -> Result<Vec<RepLabelHbar>> {
    let h = rep.h.as_ref().ok_or_else(|| Error::Decomposition("module has no H".into()))?;
    rational_entries(&h.u, "the real part of H")?;
    rational_entries(&h.v, "the imaginary part of H")?;
    let d = rep.dim();
    let us = rational_eigenvalues(&h.u, "the real part of H")?;
    let vs = rational_eigenvalues(&h.v, "the imaginary part of H")?;

    let mut weight_dims = 0;
    let mut labels = Vec::new();
    let mut span: Vec<Vec<QScalar>> = Vec::new();
    for u in &us {
        let hu = shifted(&h.u, u);
        for v in &vs {
            let hv = shifted(&h.v, v);
            weight_dims += d - stack(&[&hu, &hv]).rank(0.0);
            let w = ExtendedWeight::new(u.clone(), v.clone());
            for top in stack(&[&hu, &hv, &rep.e]).nullspace(0.0) {
                let mut orbit = vec![top];
                loop {
                    let next = rep.f.mul_vec(orbit.last().expect("nonempty"));
                    if next.iter().all(QScalar::is_zero) {
                        break;
                    }
                    if orbit.len() > d {
                        return Err(Error::Decomposition("F is not nilpotent".into()));
                    }
                    orbit.push(next);
                }
                labels.push(weight_label(&w, orbit.len() as u32 - 1)?);
                span.extend(orbit);
            }
        }
    }
    if weight_dims != d {
        return Err(Error::Decomposition("H is not diagonalizable with rational eigenvalues".into()));
    }
    if span.len() != d || Matrix::from_columns(&span).rank(0.0) != d {
        return Err(Error::Decomposition("highest-weight vectors do not generate the module".into()));
    }
    labels.sort();
    Ok(labels)
}
