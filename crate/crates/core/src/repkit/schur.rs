use super::ModuleRep;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::Field;

/// Linear system for `X` (`d2 x d1`, row-major unknowns) with
/// `X A_g = B_g X` for every generator pair.
fn intertwining_system<C: Field>(pairs: &[(Matrix<C>, Matrix<C>)], d1: usize, d2: usize) -> Matrix<C> {
    let unknowns = d1 * d2;
    let mut rows: Vec<Vec<C>> = Vec::new();
    for (a, b) in pairs {
        for i in 0..d2 {
            for j in 0..d1 {
                let mut row = vec![C::zero(); unknowns];
                for l in 0..d1 {
                    let idx = i * d1 + l;
                    row[idx] = row[idx].plus(a.get(l, j));
                }
                for l in 0..d2 {
                    let idx = l * d1 + j;
                    row[idx] = row[idx].minus(b.get(i, l));
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Matrix::zeros(0, unknowns);
    }
    Matrix::from_rows(rows)
}

/// `dim Hom(rep1, rep2)`: intertwiners `X` with `X rho1(g) = rho2(g) X`.
pub fn intertwiner_dim<C: Field>(rep1: &ModuleRep<C>, rep2: &ModuleRep<C>, tol: f64) -> Result<usize> {
    if rep1.is_hbar() != rep2.is_hbar() {
        return Err(Error::Domain("cannot compare a module with H to one without".into()));
    }
    let g1 = rep1.generators()?;
    let g2 = rep2.generators()?;
    let pairs: Vec<_> = g1.into_iter().zip(g2).collect();
    let (d1, d2) = (rep1.dim(), rep2.dim());
    let sys = intertwining_system(&pairs, d1, d2);
    Ok(d1 * d2 - if sys.rows() == 0 { 0 } else { sys.rank(tol) })
}

/// Dimension of the commutant of the image of the algebra.
pub fn commutant_dim<C: Field>(rep: &ModuleRep<C>, tol: f64) -> Result<usize> {
    intertwiner_dim(rep, rep, tol)
}

/// The Casimir `EF + (q^-1 K + q K^-1)/(q - q^-1)^2` as a matrix.
pub fn casimir_matrix<C: Field>(rep: &ModuleRep<C>) -> Result<Matrix<C>> {
    let q = &rep.q;
    let qinv = q.inverse().ok_or_else(|| Error::Domain("q must be nonzero".into()))?;
    let c0 = q.minus(&qinv).inverse().ok_or_else(|| Error::Domain("q^2 = 1 is excluded".into()))?;
    let kinv = rep.k.inverse().ok_or_else(|| Error::Domain("K is not invertible".into()))?;
    let tail = rep.k.scale(&qinv).add(&kinv.scale(q)).scale(&c0.times(&c0));
    Ok(rep.e.mul(&rep.f).add(&tail))
}

/// The scalar by which the Casimir acts; errors unless it acts as a scalar.
pub fn casimir_value<C: Field>(rep: &ModuleRep<C>, tol: f64) -> Result<C> {
    let m = casimir_matrix(rep)?;
    let c = m.get(0, 0).clone();
    let scalar = Matrix::identity(rep.dim()).scale(&c);
    let diff = m.sub(&scalar);
    let ok = if C::EXACT { diff.is_zero() } else { diff.max_abs() <= tol * m.max_abs().max(1.0) };
    if !ok {
        return Err(Error::NotIrreducible("the Casimir does not act as a scalar".into()));
    }
    Ok(c)
}

/// Casimir value, after confirming irreducibility through the commutant.
pub fn casimir_action<C: Field>(rep: &ModuleRep<C>, tol: f64) -> Result<C> {
    let dim = commutant_dim(rep, tol)?;
    if dim != 1 {
        return Err(Error::NotIrreducible(format!("commutant has dimension {dim}")));
    }
    casimir_value(rep, tol)
}
