//! Finite stage of the map into the product of matrix algebras indexed by the
//! simple modules `T_(n,eps)`.

use serde::{Deserialize, Serialize};

use super::{build_rep_q, build_rep_q_in, RepLabelQ};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::pbw::{Monomial, PbwElement};
use crate::scalars::{Field, QScalar};

pub const MAX_SEPARATION_DEGREE: u32 = 3;
pub const MAX_SEPARATION_STAGE: u32 = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeBlock<C> {
    pub label: RepLabelQ,
    pub matrix: Matrix<C>,
}

/// Labels in block order: `(0,+), (0,-), (1,+), (1,-), ..., (N,-)`.
pub fn stage_labels(n_max: u32) -> Vec<RepLabelQ> {
    (0..=n_max).flat_map(|n| [RepLabelQ { n, eps: 1 }, RepLabelQ { n, eps: -1 }]).collect()
}

struct BlockPowers<C> {
    e: Vec<Matrix<C>>,
    f: Vec<Matrix<C>>,
    k: Matrix<C>,
    kinv: Matrix<C>,
}

impl<C: Field> BlockPowers<C> {
    fn new(e: Matrix<C>, f: Matrix<C>, k: Matrix<C>) -> Result<Self> {
        let kinv = k.inverse().ok_or_else(|| Error::Domain("K is not invertible".into()))?;
        let d = e.rows();
        Ok(BlockPowers { e: vec![Matrix::identity(d), e], f: vec![Matrix::identity(d), f], k, kinv })
    }

    fn power(cache: &mut Vec<Matrix<C>>, n: u32) -> Matrix<C> {
        while cache.len() <= n as usize {
            let next = cache.last().expect("nonempty").mul(&cache[1]);
            cache.push(next);
        }
        cache[n as usize].clone()
    }

    fn k_pow(&self, j: i64) -> Result<Matrix<C>> {
        // K is diagonal, so powers are entrywise
        let base = if j < 0 { &self.kinv } else { &self.k };
        let diag: Vec<C> = base.diag().iter().map(|x| x.powi(j.abs()).expect("nonneg power")).collect();
        Ok(Matrix::diagonal(&diag))
    }

    fn eval(&mut self, m: Monomial) -> Result<Matrix<C>> {
        let f = Self::power(&mut self.f, m.f);
        let e = Self::power(&mut self.e, m.e);
        Ok(f.mul(&self.k_pow(m.k)?).mul(&e))
    }
}

/// Blocks `T_(n,eps)(x)` for `n = 0..=n_max`, both signs.
pub fn envelope_eval<C: Field>(x: &PbwElement<C>, n_max: u32) -> Result<Vec<EnvelopeBlock<C>>> {
    stage_labels(n_max)
        .into_iter()
        .map(|label| {
            let rep = build_rep_q_in(label, x.q())?;
            let d = rep.dim();
            let mut powers = BlockPowers::new(rep.e, rep.f, rep.k)?;
            let mut acc = Matrix::zeros(d, d);
            for (m, c) in x.terms() {
                acc = acc.add(&powers.eval(*m)?.scale(c));
            }
            Ok(EnvelopeBlock { label, matrix: acc })
        })
        .collect()
}

/// PBW monomials `F^r K^j E^s` with `r + s + |j| <= degree`.
pub fn monomials_up_to(degree: u32) -> Vec<Monomial> {
    let d = degree as i64;
    let mut out = Vec::new();
    for r in 0..=d {
        for s in 0..=d - r {
            let rest = d - r - s;
            for j in -rest..=rest {
                out.push(Monomial::new(r as u32, j, s as u32));
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationRank {
    pub degree: u32,
    pub stage: u32,
    pub rank: usize,
    pub monomials: usize,
}

fn check_guard(degree: u32, stage: u32) -> Result<()> {
    if degree > MAX_SEPARATION_DEGREE || stage > MAX_SEPARATION_STAGE {
        return Err(Error::SizeGuard(format!(
            "separation rank is limited to degree <= {MAX_SEPARATION_DEGREE} and N <= {MAX_SEPARATION_STAGE} (got degree {degree}, N {stage})"
        )));
    }
    Ok(())
}

/// Exact rank of the evaluation map from monomials of bounded degree into
/// the blocks of stage `n_max`.
pub fn separation_rank(degree: u32, n_max: u32) -> Result<SeparationRank> {
    check_guard(degree, n_max)?;
    let monos = monomials_up_to(degree);
    let mut rows: Vec<Vec<QScalar>> = vec![Vec::new(); monos.len()];
    for label in stage_labels(n_max) {
        let rep = build_rep_q(label)?;
        let mut powers = BlockPowers::new(rep.e, rep.f, rep.k)?;
        for (row, m) in rows.iter_mut().zip(&monos) {
            row.extend_from_slice(powers.eval(*m)?.entries());
        }
    }
    let rank = Matrix::from_rows(rows).rank(0.0);
    Ok(SeparationRank { degree, stage: n_max, rank, monomials: monos.len() })
}

/// Ranks at every stage `0..=n_max` and the first stage from which the rank
/// no longer changes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationProfile {
    pub degree: u32,
    pub monomials: usize,
    pub ranks: Vec<usize>,
    pub stabilized_at: u32,
    /// True when the last rank is confirmed by a later stage or equals the
    /// number of monomials.
    pub confirmed: bool,
}

pub fn separation_profile(degree: u32, n_max: u32) -> Result<SeparationProfile> {
    check_guard(degree, n_max)?;
    let runs = (0..=n_max).map(|n| separation_rank(degree, n)).collect::<Result<Vec<_>>>()?;
    let ranks: Vec<usize> = runs.iter().map(|r| r.rank).collect();
    let last = *ranks.last().expect("nonempty");
    let stabilized_at = ranks.iter().position(|&r| r == last).expect("present") as u32;
    let monomials = runs[0].monomials;
    Ok(SeparationProfile { degree, monomials, ranks, stabilized_at, confirmed: stabilized_at < n_max || last == monomials })
}
