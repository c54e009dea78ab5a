//! Truncated nerves of finite categories.
//!
//! An n-simplex is a chain `C₀ → C₁ → … → Cₙ` of n composable morphisms.
//! Only nondegenerate simplices (no identity in the chain) are stored; a face
//! that composes two arrows into an identity is recorded as degenerate and
//! contributes nothing to the normalized chain complex.

use std::collections::HashMap;

use crate::budget::{Budget, ResourceLimit};
use crate::category::{FiniteCategory, Mor, Obj};
use crate::homology::{ChainComplex, HomologyResult};
use num_bigint::BigInt;

use crate::snf::{streaming_invariants, SparseMatrix};

const DEGENERATE: u32 = u32::MAX;

/// Face of a simplex: an index into the previous dimension, or degenerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    Simplex(usize),
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct TruncatedNerve {
    max_dim: usize,
    vertices: Vec<Obj>,
    /// `arrows[n]` holds the n-simplices of dimension n ≥ 1 flat, n arrows each.
    arrows: Vec<Vec<u32>>,
    /// `faces[n]` holds n + 1 face indices per n-simplex.
    faces: Vec<Vec<u32>>,
}

impl TruncatedNerve {
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn count(&self, n: usize) -> usize {
        match n {
            0 => self.vertices.len(),
            _ => self.arrows[n].len() / n,
        }
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..=self.max_dim).map(|n| self.count(n)).collect()
    }

    pub fn vertex(&self, i: usize) -> Obj {
        self.vertices[i]
    }

    /// Arrows of the i-th n-simplex in application order, `n ≥ 1`.
    pub fn chain(&self, n: usize, i: usize) -> Vec<Mor> {
        self.arrows[n][i * n..(i + 1) * n]
            .iter()
            .map(|&m| Mor(m as usize))
            .collect()
    }

    /// `j`-th face of the `i`-th n-simplex.
    pub fn face(&self, n: usize, i: usize, j: usize) -> Face {
        match self.faces[n][i * (n + 1) + j] {
            DEGENERATE => Face::Degenerate,
            k => Face::Simplex(k as usize),
        }
    }

    /// Column `i` of ∂ₙ, sorted by row with repeated faces merged.
    pub fn boundary_column(&self, n: usize, i: usize) -> Vec<(usize, i64)> {
        let mut v: Vec<(usize, i64)> = (0..=n)
            .filter_map(|j| match self.face(n, i, j) {
                Face::Simplex(k) => Some((k, if j % 2 == 0 { 1 } else { -1 })),
                Face::Degenerate => None,
            })
            .collect();
        v.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(v.len());
        for (r, x) in v {
            match out.last_mut() {
                Some(last) if last.0 == r => last.1 += x,
                _ => out.push((r, x)),
            }
        }
        out.retain(|e| e.1 != 0);
        out
    }

    /// Homology in degrees `0..=d < max_dim`, streaming each boundary
    /// matrix through the reducer instead of materializing it.
    pub fn homology(&self, d: usize, budget: &Budget) -> Result<HomologyResult, ResourceLimit> {
        assert!(d < self.max_dim, "nerve too short for degree {d}");
        let ranks = self.counts();
        let invariants: Vec<Vec<BigInt>> = (1..=d + 1)
            .map(|n| {
                streaming_invariants(
                    ranks[n - 1],
                    (0..ranks[n]).map(|i| self.boundary_column(n, i)),
                    budget,
                )
            })
            .collect::<Result<_, _>>()?;
        Ok(HomologyResult::from_invariants(&ranks, &invariants, d))
    }

    /// Normalized chains: alternating face sums with degenerate faces dropped.
    pub fn chain_complex(&self) -> ChainComplex {
        let ranks = self.counts();
        let boundaries = (1..=self.max_dim)
            .map(|n| {
                let mut m = SparseMatrix::new(ranks[n - 1], ranks[n]);
                for i in 0..ranks[n] {
                    let entries = (0..=n).filter_map(|j| match self.face(n, i, j) {
                        Face::Simplex(k) => Some((k, if j % 2 == 0 { 1 } else { -1 })),
                        Face::Degenerate => None,
                    });
                    m.set_column(i, entries);
                }
                m
            })
            .collect();
        ChainComplex { ranks, boundaries }
    }

    /// Simplicial identity dᵢdⱼ = dⱼ₋₁dᵢ (i < j) on the stored face data.
    /// Degeneracy is tracked consistently: a degenerate face has only
    /// degenerate or undefined iterated faces, so pairs touching one are skipped.
    pub fn simplicial_identities_hold(&self) -> bool {
        for n in 2..=self.max_dim {
            for s in 0..self.count(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = match self.face(n, s, j) {
                            Face::Simplex(k) => self.face(n - 1, k, i),
                            Face::Degenerate => continue,
                        };
                        let rhs = match self.face(n, s, i) {
                            Face::Simplex(k) => self.face(n - 1, k, j - 1),
                            Face::Degenerate => continue,
                        };
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// All nondegenerate simplices up to dimension `d` with their faces.
pub fn nerve_truncated(
    c: &FiniteCategory,
    d: usize,
    budget: &Budget,
) -> Result<TruncatedNerve, ResourceLimit> {
    let vertices: Vec<Obj> = c.object_indices().collect();
    budget.tick("nerve simplices", vertices.len() as u64)?;
    let mut arrows: Vec<Vec<u32>> = vec![Vec::new(); d + 1];
    let mut faces: Vec<Vec<u32>> = vec![Vec::new(); d + 1];
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    for n in 1..=d {
        let prev_count = if n == 1 {
            vertices.len()
        } else {
            arrows[n - 1].len() / (n - 1)
        };
        let mut next_index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut out = Vec::new();
        let mut out_faces = Vec::new();
        let mut count = 0u32;
        for p in 0..prev_count {
            let (prefix, end) = if n == 1 {
                (Vec::new(), vertices[p])
            } else {
                let pre = arrows[n - 1][p * (n - 1)..(p + 1) * (n - 1)].to_vec();
                let last = Mor(*pre.last().unwrap() as usize);
                (pre, c.tgt(last))
            };
            for &m in c.out_of(end) {
                if c.is_identity(m) {
                    continue;
                }
                budget.tick("nerve simplices", 1)?;
                let mut chain = prefix.clone();
                chain.push(m.0 as u32);
                // d₀ drops the first arrow, dₙ drops the last, inner faces compose.
                for j in 0..=n {
                    let face = if n == 1 {
                        let obj = if j == 0 { c.tgt(m) } else { c.src(m) };
                        obj.0 as u32
                    } else if j == 0 {
                        index[&chain[1..]]
                    } else if j == n {
                        p as u32
                    } else {
                        let comp =
                            c.compose_unchecked(Mor(chain[j] as usize), Mor(chain[j - 1] as usize));
                        if c.is_identity(comp) {
                            DEGENERATE
                        } else {
                            let mut f = Vec::with_capacity(n - 1);
                            f.extend_from_slice(&chain[..j - 1]);
                            f.push(comp.0 as u32);
                            f.extend_from_slice(&chain[j + 1..]);
                            index[&f]
                        }
                    };
                    out_faces.push(face);
                }
                if n < d {
                    next_index.insert(chain.clone(), count);
                }
                out.extend_from_slice(&chain);
                count += 1;
            }
        }
        arrows[n] = out;
        faces[n] = out_faces;
        index = next_index;
    }
    Ok(TruncatedNerve {
        max_dim: d,
        vertices,
        arrows,
        faces,
    })
}

/// Homology of the nerve in degrees `0..=d` (uses the `(d+1)`-skeleton).
pub fn nerve_homology(
    c: &FiniteCategory,
    d: usize,
    budget: &Budget,
) -> Result<HomologyResult, ResourceLimit> {
    nerve_truncated(c, d + 1, budget)?.homology(d, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn budget() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn bs2_has_one_simplex_per_dimension() {
        let n = nerve_truncated(&zoo::cyclic_group(2), 3, &budget()).unwrap();
        assert_eq!(n.counts(), vec![1, 1, 1, 1]);
        // Inner faces of (t, t) compose to the identity.
        assert_eq!(n.face(2, 0, 1), Face::Degenerate);
        assert_eq!(n.face(2, 0, 0), Face::Simplex(0));
        assert!(n.simplicial_identities_hold());
    }

    #[test]
    fn walking_arrow_and_discrete() {
        let n = nerve_truncated(&zoo::walking_arrow(), 2, &budget()).unwrap();
        assert_eq!(n.counts(), vec![2, 1, 0]);
        let n = nerve_truncated(&zoo::discrete(3), 1, &budget()).unwrap();
        assert_eq!(n.counts(), vec![3, 0]);
    }

    #[test]
    fn chains_are_composable_and_identity_free() {
        let c = zoo::symmetric_group(3);
        let n = nerve_truncated(&c, 3, &budget()).unwrap();
        assert_eq!(n.counts(), vec![1, 5, 25, 125]);
        for dim in 1..=3 {
            for i in 0..n.count(dim) {
                let ch = n.chain(dim, i);
                assert!(ch.iter().all(|&m| !c.is_identity(m)));
                assert!(ch.windows(2).all(|w| c.src(w[1]) == c.tgt(w[0])));
            }
        }
        assert!(n.simplicial_identities_hold());
        assert!(n.chain_complex().boundary_squares_to_zero());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let c = zoo::symmetric_group(3);
        assert!(nerve_truncated(&c, 4, &Budget::new(100)).is_err());
    }
}
