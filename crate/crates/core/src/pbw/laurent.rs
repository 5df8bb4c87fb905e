use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Field, NumericScalar, QScalar};

use super::{check_exponent, Monomial, PbwElement};

/// `sum_j c_j K^j`, an element of the commutative subalgebra generated by `K`
/// and `K^-1`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de> + Field"))]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: Field> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Field> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, C::one())
    }

    pub fn monomial(j: i64, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(j, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (j, c) in terms {
            p.add_term(j, c);
        }
        p
    }

    pub fn add_term(&mut self, j: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&j) {
            Some(old) => {
                *old = old.plus(&c);
                if old.is_zero() {
                    self.terms.remove(&j);
                }
            }
            None => {
                self.terms.insert(j, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, C> {
        &self.terms
    }

    pub fn coeff(&self, j: i64) -> C {
        self.terms.get(&j).cloned().unwrap_or_else(C::zero)
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

    /// Exponent range `(min, max)`, or `None` for zero.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&j, c) in &rhs.terms {
            out.add_term(j, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().negate())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&j, x)| (j, x.times(c))))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(check_exponent(a as i128 + b as i128)?, x.times(y));
            }
        }
        Ok(out)
    }

    /// `sigma^n`, acting by `K^j -> q^(2nj) K^j`.
    pub fn sigma_pow(&self, n: i64, q: &C) -> Result<Self> {
        let mut out = Self::zero();
        for (&j, c) in &self.terms {
            let e = check_exponent(2 * n as i128 * j as i128)?;
            let f = q.powi(e).ok_or_else(|| Error::Domain("q must be nonzero".into()))?;
            out.add_term(j, c.times(&f));
        }
        Ok(out)
    }

    /// Embeds as a PBW element over the algebra with parameter `q`.
    pub fn to_pbw(&self, q: &C) -> PbwElement<C> {
        PbwElement::from_terms(q.clone(), self.terms.iter().map(|(&j, c)| (Monomial::new(0, j, 0), c.clone())))
    }

    /// Reads back a PBW element with no `E` or `F` factors.
    pub fn from_pbw(x: &PbwElement<C>) -> Option<Self> {
        let mut out = Self::zero();
        for (m, c) in x.terms() {
            if m.f != 0 || m.e != 0 {
                return None;
            }
            out.add_term(m.k, c.clone());
        }
        Some(out)
    }

    /// Evaluates at a concrete matrix-free value of `K`.
    pub fn eval(&self, k: &C) -> Option<C> {
        self.terms.iter().try_fold(C::zero(), |acc, (&j, c)| Some(acc.plus(&c.times(&k.powi(j)?))))
    }
}

impl LaurentPoly<QScalar> {
    pub fn specialize(&self, qval: NumericScalar) -> Result<LaurentPoly<NumericScalar>> {
        let mut out = LaurentPoly::zero();
        for (&j, c) in &self.terms {
            out.add_term(j, c.specialize(qval)?);
        }
        Ok(out)
    }
}

impl<C: Field> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (j, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match j {
                0 => write!(f, "{{{c}}}")?,
                _ => write!(f, "{{{c}}}*K^{j}")?,
            }
        }
        Ok(())
    }
}
