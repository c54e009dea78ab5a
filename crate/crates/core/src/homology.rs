//! Chain complexes over Z and their homology.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::budget::{Budget, ResourceLimit};
use crate::snf::{invariant_factors, SparseMatrix};

/// `boundaries[n-1]` is ∂ₙ: Cₙ → Cₙ₋₁ for `n = 1..=top`.
#[derive(Clone, Debug, Default)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    /// ∂ₙ, or an empty map when `n` is out of the stored range.
    pub fn boundary(&self, n: usize) -> SparseMatrix {
        if n == 0 || n > self.boundaries.len() {
            let cols = self.ranks.get(n).copied().unwrap_or(0);
            let rows = if n == 0 {
                0
            } else {
                self.ranks.get(n - 1).copied().unwrap_or(0)
            };
            return SparseMatrix::new(rows, cols);
        }
        self.boundaries[n - 1].clone()
    }

    /// Exact check of ∂ₙ₋₁∂ₙ = 0 for every stored pair.
    pub fn boundary_squares_to_zero(&self) -> bool {
        self.boundaries.windows(2).all(|w| {
            w[0].mul(&w[1])
                .iter()
                .all(|row| row.iter().all(|&x| x == 0))
        })
    }

    /// Homology in degrees `0..=d`; needs ∂ up to degree `d + 1`.
    pub fn homology(&self, d: usize, budget: &Budget) -> Result<HomologyResult, ResourceLimit> {
        assert!(
            d < self.ranks.len(),
            "chain complex too short for degree {d}"
        );
        let invariants: Vec<Vec<BigInt>> = (1..=d + 1)
            .map(|n| {
                if n <= self.boundaries.len() {
                    invariant_factors(&self.boundaries[n - 1], budget)
                } else {
                    Ok(Vec::new())
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(HomologyResult::from_invariants(&self.ranks, &invariants, d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        Self {
            betti: rank,
            torsion: Vec::new(),
        }
    }

    pub fn with_torsion(rank: usize, torsion: &[u64]) -> Self {
        Self {
            betti: rank,
            torsion: torsion.iter().map(|&t| BigInt::from(t)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match u64::try_from(x) {
            Ok(n) => seq.serialize_element(&n)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// Integral homology in degrees `0..=max_dim`; values above are not computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub max_dim: usize,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    /// `invariants[n - 1]` are the nonzero Smith invariants of ∂ₙ, `n = 1..=d+1`.
    pub fn from_invariants(ranks: &[usize], invariants: &[Vec<BigInt>], d: usize) -> Self {
        let groups = (0..=d)
            .map(|n| {
                let rank_out = if n == 0 { 0 } else { invariants[n - 1].len() };
                let into = &invariants[n];
                HomologyGroup {
                    betti: ranks[n] - rank_out - into.len(),
                    torsion: into.iter().filter(|x| !x.is_one()).cloned().collect(),
                }
            })
            .collect();
        HomologyResult { max_dim: d, groups }
    }

    pub fn degree(&self, n: usize) -> &HomologyGroup {
        &self.groups[n]
    }

    /// Reduced homology vanishes: H₀ = Z and Hₙ = 0 for 0 < n ≤ max_dim.
    pub fn is_acyclic(&self) -> bool {
        self.groups
            .first()
            .is_some_and(|g| g.betti == 1 && g.torsion.is_empty())
            && self.groups.iter().skip(1).all(HomologyGroup::is_zero)
    }

    /// First degree with nonvanishing reduced homology.
    pub fn first_reduced_nonzero(&self) -> Option<usize> {
        self.groups.iter().enumerate().find_map(|(n, g)| {
            let nonzero = if n == 0 {
                g.betti != 1 || !g.torsion.is_empty()
            } else {
                !g.is_zero()
            };
            nonzero.then_some(n)
        })
    }

    pub fn truncate(&self, d: usize) -> HomologyResult {
        HomologyResult {
            max_dim: d.min(self.max_dim),
            groups: self.groups[..=d.min(self.max_dim)].to_vec(),
        }
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .enumerate()
            .map(|(n, g)| format!("H{n}={g}"))
            .collect();
        write!(f, "{} (valid to degree {})", parts.join(", "), self.max_dim)
    }
}
