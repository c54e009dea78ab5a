//! Words over a generating set and finite group presentations.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::budget::Budget;
use crate::snf::{cokernel, invariant_factors, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Self { gen, inv: false }
    }

    pub fn neg(gen: usize) -> Self {
        Self { gen, inv: true }
    }

    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

pub type Word = Vec<Letter>;

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by cancelling inverse letters at the two ends.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let (mut i, mut j) = (0, w.len());
    while j - i >= 2 && w[i] == w[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    w[i..j].to_vec()
}

/// Least rotation of `w` or of its inverse, for duplicate detection.
pub fn cyclic_canonical(w: &[Letter]) -> Word {
    let w = cyclic_reduce(w);
    if w.is_empty() {
        return w;
    }
    let inv = inverse(&w);
    let mut best: Option<Word> = None;
    for base in [&w, &inv] {
        for k in 0..base.len() {
            let rot: Word = base[k..].iter().chain(&base[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

/// Exponent sum of each generator.
pub fn exponent_sums(w: &[Letter], gens: usize) -> Vec<i64> {
    let mut v = vec![0; gens];
    for l in w {
        v[l.gen] += if l.inv { -1 } else { 1 };
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relator {relator} mentions undeclared generator {gen}")]
    UndeclaredGenerator { relator: usize, gen: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (r, w) in relators.iter().enumerate() {
            if let Some(l) = w.iter().find(|l| l.gen >= generators.len()) {
                return Err(PresentationError::UndeclaredGenerator {
                    relator: r,
                    gen: l.gen,
                });
            }
        }
        Ok(Self {
            generators,
            relators,
        })
    }

    /// Parses words like `a b^-1 a^2`; `1` is the empty word.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, PresentationError> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators
            .iter()
            .map(|r| parse_word(&gens, r))
            .collect::<Result<_, _>>()?;
        Self::new(gens, rels)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    pub fn word_to_string(&self, w: &[Letter]) -> String {
        format_word(&self.generators, w)
    }

    pub fn relator_strings(&self) -> Vec<String> {
        self.relators
            .iter()
            .map(|r| self.word_to_string(r))
            .collect()
    }

    /// Free rank and torsion of the abelianization.
    pub fn abelianization(
        &self,
        budget: &Budget,
    ) -> Result<Abelianization, crate::budget::ResourceLimit> {
        let n = self.generators.len();
        let mut m = SparseMatrix::new(n, self.relators.len());
        for (c, r) in self.relators.iter().enumerate() {
            let sums = exponent_sums(r, n);
            m.set_column(c, sums.into_iter().enumerate().filter(|&(_, x)| x != 0));
        }
        let inv = invariant_factors(&m, budget)?;
        let (rank, torsion) = cokernel(n, &inv);
        Ok(Abelianization { rank, torsion })
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "< {} | {} >",
            self.generators.join(", "),
            self.relator_strings().join(", ")
        )
    }
}

pub fn parse_word(gens: &[String], s: &str) -> Result<Word, PresentationError> {
    let mut w = Vec::new();
    for tok in s.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| PresentationError::UnknownGenerator(tok.into()))?,
            ),
            None => (tok, 1),
        };
        let g = gens
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| PresentationError::UnknownGenerator(name.into()))?;
        let l = if exp < 0 {
            Letter::neg(g)
        } else {
            Letter::pos(g)
        };
        w.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
    }
    Ok(w)
}

/// Runs of equal letters are written with exponents; the empty word is `1`.
pub fn format_word(gens: &[String], w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let e = (j - i) as i64 * if w[i].inv { -1 } else { 1 };
        let g = &gens[w[i].gen];
        parts.push(if e == 1 {
            g.clone()
        } else {
            format!("{g}^{e}")
        });
        i = j;
    }
    parts.join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub rank: usize,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<BigInt>,
}

impl Abelianization {
    pub fn new(rank: usize, torsion: &[u64]) -> Self {
        Self {
            rank,
            torsion: torsion.iter().map(|&t| BigInt::from(t)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.iter().all(One::is_one)
    }

    /// Order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            crate::homology::HomologyGroup {
                betti: self.rank,
                torsion: self.torsion.clone()
            }
        )
    }
}

fn serialize_torsion<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_u64() {
            Some(n) => seq.serialize_element(&n)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        let (a, b) = (Letter::pos(0), Letter::pos(1));
        assert_eq!(free_reduce(&[a, b, b.inverse(), a]), vec![a, a]);
        assert_eq!(cyclic_reduce(&[a.inverse(), b, a]), vec![b]);
        assert_eq!(cyclic_canonical(&[b, a]), cyclic_canonical(&[a, b]));
        assert_eq!(
            cyclic_canonical(&[a.inverse(), b.inverse()]),
            cyclic_canonical(&[a, b])
        );
    }

    #[test]
    fn parse_and_format() {
        let p = GroupPresentation::parse(&["a", "b"], &["a b a^-1 b^-1", "a^2 b^-4", "1"]).unwrap();
        assert_eq!(p.relators[1].len(), 6);
        assert!(p.relators[2].is_empty());
        assert_eq!(p.relator_strings(), vec!["a b a^-1 b^-1", "a^2 b^-4", "1"]);
        assert!(GroupPresentation::new(vec!["a".into()], vec![vec![Letter::pos(3)]]).is_err());
    }

    #[test]
    fn abelianization_examples() {
        let b = Budget::unlimited();
        let p = GroupPresentation::parse(&["t"], &["t^2"]).unwrap();
        assert_eq!(p.abelianization(&b).unwrap(), Abelianization::new(0, &[2]));
        let p = GroupPresentation::parse(&["g"], &[]).unwrap();
        assert_eq!(p.abelianization(&b).unwrap(), Abelianization::new(1, &[]));
        // Relation matrix [[0,0],[2,-4]] has invariant factors [2].
        let p = GroupPresentation::parse(&["a", "b"], &["a b a^-1 b^-1", "a^2 b^-4"]).unwrap();
        assert_eq!(p.abelianization(&b).unwrap(), Abelianization::new(1, &[2]));
    }
}
