//! Normalization by rewriting words in the generators.
//!
//! A word is normal when it reads `F...F K...K E...E` (or with `K^-1` in the
//! middle block). Every other word contains an adjacent pair to which one of
//!
//! ```text
//! E F -> F E + c (K - K^-1)     E K -> q^-2 K E      E K^-1 -> q^2 K^-1 E
//! K F -> q^-2 F K               K^-1 F -> q^2 F K^-1
//! K K^-1 -> 1                   K^-1 K -> 1
//! ```
//!
//! applies, with `c = 1/(q - q^-1)`. Each rule either shortens the word or
//! removes one inversion of the order `F < K, K^-1 < E` without creating new
//! ones among the remaining letters, so rewriting terminates.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_exponent, Monomial, PbwElement, Uq};
use crate::error::{Error, Result};
use crate::expr::{Expr, Generator};
use crate::scalars::Field;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Letter {
    F,
    K,
    Kinv,
    E,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::E => "E",
            Letter::F => "F",
            Letter::K => "K",
            Letter::Kinv => "Kinv",
        })
    }
}

pub type Word = Vec<Letter>;

/// Parses a plain word such as `"EFKKinvE"`.
pub fn parse_word(s: &str) -> Result<Word> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("Kinv") {
            out.push(Letter::Kinv);
            rest = r;
            continue;
        }
        let c = rest.chars().next().expect("nonempty");
        out.push(match c {
            'E' => Letter::E,
            'F' => Letter::F,
            'K' => Letter::K,
            _ => return Err(Error::Domain(format!("`{c}` is not a generator letter"))),
        });
        rest = &rest[c.len_utf8()..];
    }
    Ok(out)
}

/// Positions `i` where the pair `(w[i], w[i+1])` can be rewritten.
pub fn redexes(w: &[Letter]) -> Vec<usize> {
    (0..w.len().saturating_sub(1)).filter(|&i| is_redex(w[i], w[i + 1])).collect()
}

fn is_redex(a: Letter, b: Letter) -> bool {
    use Letter::*;
    matches!((a, b), (E, F) | (E, K) | (E, Kinv) | (K, F) | (Kinv, F) | (K, Kinv) | (Kinv, K))
}

/// Reads a normal word as a PBW monomial.
pub fn word_to_monomial(w: &[Letter]) -> Option<Monomial> {
    if !redexes(w).is_empty() {
        return None;
    }
    let mut m = Monomial::ONE;
    for l in w {
        match l {
            Letter::F => m.f += 1,
            Letter::K => m.k += 1,
            Letter::Kinv => m.k -= 1,
            Letter::E => m.e += 1,
        }
    }
    Some(m)
}

impl<C: Field> Uq<C> {
    /// Applies the relation at position `pos`, returning the resulting
    /// combination of words, or `None` if no relation applies there.
    pub fn rewrite_at(&self, w: &[Letter], pos: usize) -> Option<Vec<(C, Word)>> {
        use Letter::*;
        if pos + 1 >= w.len() || !is_redex(w[pos], w[pos + 1]) {
            return None;
        }
        let q2 = self.q.powi(2)?;
        let q2inv = self.q.powi(-2)?;
        let splice = |mid: &[Letter]| -> Word {
            let mut out = w[..pos].to_vec();
            out.extend_from_slice(mid);
            out.extend_from_slice(&w[pos + 2..]);
            out
        };
        let out = match (w[pos], w[pos + 1]) {
            (E, F) => {
                let c = self.q.minus(&self.q.inverse()?).inverse()?;
                vec![(C::one(), splice(&[F, E])), (c.clone(), splice(&[K])), (c.negate(), splice(&[Kinv]))]
            }
            (E, K) => vec![(q2inv, splice(&[K, E]))],
            (E, Kinv) => vec![(q2, splice(&[Kinv, E]))],
            (K, F) => vec![(q2inv, splice(&[F, K]))],
            (Kinv, F) => vec![(q2, splice(&[F, Kinv]))],
            (K, Kinv) | (Kinv, K) => vec![(C::one(), splice(&[]))],
            _ => unreachable!("checked by is_redex"),
        };
        Some(out)
    }

    /// Normalizes a linear combination of words, choosing which redex to
    /// rewrite with `choose` (given the word and its redex positions).
    pub fn normalize_words_with(
        &self,
        input: Vec<(C, Word)>,
        mut choose: impl FnMut(&[Letter], &[usize]) -> usize,
    ) -> Result<PbwElement<C>> {
        let mut pending: BTreeMap<Word, C> = BTreeMap::new();
        let mut done: Vec<(Monomial, C)> = Vec::new();
        let push = |pending: &mut BTreeMap<Word, C>, w: Word, c: C| {
            if c.is_zero() {
                return;
            }
            let slot = pending.entry(w).or_insert_with(C::zero);
            *slot = slot.plus(&c);
        };
        for (c, w) in input {
            push(&mut pending, w, c);
        }
        while let Some((w, c)) = pending.pop_first() {
            if c.is_zero() {
                continue;
            }
            let rs = redexes(&w);
            if rs.is_empty() {
                let m = word_to_monomial(&w).expect("no redexes");
                check_exponent(m.k as i128)?;
                done.push((m, c));
                continue;
            }
            let pos = rs[choose(&w, &rs) % rs.len()];
            let parts = self.rewrite_at(&w, pos).ok_or_else(|| Error::Domain("q must satisfy q^2 != 1".into()))?;
            for (cc, ww) in parts {
                push(&mut pending, ww, c.times(&cc));
            }
        }
        Ok(PbwElement::from_terms(self.q.clone(), done))
    }

    /// Normalizes a single word by always rewriting the leftmost redex.
    pub fn normalize_word(&self, w: &[Letter]) -> Result<PbwElement<C>> {
        self.normalize_words_with(vec![(C::one(), w.to_vec())], |_, _| 0)
    }
}

/// Expands an expression without brackets or negative powers into words.
pub fn expr_to_words<C: Field>(uq: &Uq<C>, e: &Expr) -> Result<Vec<(C, Word)>> {
    let concat = |x: &[(C, Word)], y: &[(C, Word)]| -> Vec<(C, Word)> {
        let mut out = Vec::with_capacity(x.len() * y.len());
        for (c1, w1) in x {
            for (c2, w2) in y {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.push((c1.times(c2), w));
            }
        }
        out
    };
    Ok(match e {
        Expr::Gen(g) => {
            let l = match g {
                Generator::E => Letter::E,
                Generator::F => Letter::F,
                Generator::K => Letter::K,
                Generator::Kinv => Letter::Kinv,
                Generator::H => return Err(Error::Domain("H is not a letter of U_q(sl2)".into())),
            };
            vec![(C::one(), vec![l])]
        }
        Expr::Scalar(s) => vec![(uq.embed(s)?, vec![])],
        Expr::Add(a, b) => {
            let mut x = expr_to_words(uq, a)?;
            x.extend(expr_to_words(uq, b)?);
            x
        }
        Expr::Sub(a, b) => {
            let mut x = expr_to_words(uq, a)?;
            x.extend(expr_to_words(uq, b)?.into_iter().map(|(c, w)| (c.negate(), w)));
            x
        }
        Expr::Neg(a) => expr_to_words(uq, a)?.into_iter().map(|(c, w)| (c.negate(), w)).collect(),
        Expr::Mul(a, b) => concat(&expr_to_words(uq, a)?, &expr_to_words(uq, b)?),
        Expr::Pow(a, n) if *n >= 0 => {
            let base = expr_to_words(uq, a)?;
            let mut acc = vec![(C::one(), Vec::new())];
            for _ in 0..*n {
                acc = concat(&acc, &base);
            }
            acc
        }
        _ => return Err(Error::Domain(format!("`{e}` is outside the word fragment"))),
    })
}
