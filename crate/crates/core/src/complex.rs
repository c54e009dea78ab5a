//! Abstract simplicial complexes, face posets and barycentric subdivision.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::budget::{Budget, ResourceLimit};
use crate::category::FiniteCategory;
use crate::homology::{ChainComplex, HomologyResult};
use crate::poset::Poset;
use crate::snf::SparseMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("empty facet")]
    EmptyFacet,
}

/// A complex given by its facets. Vertices are sorted ids; every facet is a
/// sorted vertex-index list and no facet is contained in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Facets contained in other facets are dropped.
    pub fn new(facets: &[Vec<String>]) -> Result<Self, ComplexError> {
        if facets.iter().any(Vec::is_empty) {
            return Err(ComplexError::EmptyFacet);
        }
        let vertices: Vec<String> = facets
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pos = |v: &String| vertices.binary_search(v).unwrap();
        let sets: BTreeSet<Vec<usize>> = facets
            .iter()
            .map(|f| {
                f.iter()
                    .map(pos)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect()
            })
            .collect();
        let all: Vec<Vec<usize>> = sets.into_iter().collect();
        let facets = all
            .iter()
            .filter(|f| {
                !all.iter()
                    .any(|g| g.len() > f.len() && f.iter().all(|v| g.binary_search(v).is_ok()))
            })
            .cloned()
            .collect();
        Ok(Self { vertices, facets })
    }

    /// Boundary of the n-simplex on vertices `0..=n`.
    pub fn simplex_boundary(n: usize) -> Self {
        let facets: Vec<Vec<String>> = (0..=n)
            .map(|skip| {
                (0..=n)
                    .filter(|&v| v != skip)
                    .map(|v| v.to_string())
                    .collect()
            })
            .collect();
        Self::new(&facets).expect("nonempty facets")
    }

    pub fn simplex(n: usize) -> Self {
        Self::new(&[(0..=n).map(|v| v.to_string()).collect()]).expect("nonempty facet")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn facet_names(&self) -> Vec<Vec<String>> {
        self.facets
            .iter()
            .map(|f| f.iter().map(|&v| self.vertices[v].clone()).collect())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.facets.iter().map(|f| f.len() - 1).max().unwrap_or(0)
    }

    /// All nonempty faces, grouped by dimension, each list sorted.
    pub fn faces(&self) -> Vec<Vec<Vec<usize>>> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); self.dim() + 1];
        for f in &self.facets {
            for mask in 1u64..(1u64 << f.len()) {
                let face: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                by_dim[face.len() - 1].insert(face);
            }
        }
        by_dim
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect()
    }

    pub fn face_name(&self, face: &[usize]) -> String {
        let names: Vec<&str> = face.iter().map(|&v| self.vertices[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Nonempty faces ordered by inclusion, and the corresponding category.
pub fn face_poset(k: &SimplicialComplex) -> (Poset, FiniteCategory) {
    let faces: Vec<Vec<usize>> = k.faces().into_iter().flatten().collect();
    let names: Vec<String> = faces.iter().map(|f| k.face_name(f)).collect();
    let mut pairs = Vec::new();
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            if i != j && a.len() < b.len() && a.iter().all(|v| b.binary_search(v).is_ok()) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let poset = Poset::from_relations(&names, &pairs).expect("inclusion is a partial order");
    let cat = poset.to_category();
    (poset, cat)
}

/// Order complex of the face poset: vertices are faces, facets are maximal chains.
pub fn barycentric_subdivide(k: &SimplicialComplex) -> SimplicialComplex {
    let (poset, _) = face_poset(k);
    order_complex(&poset)
}

/// Simplicial complex of chains of a poset.
pub fn order_complex(p: &Poset) -> SimplicialComplex {
    let n = p.len();
    let mut facets: Vec<Vec<String>> = Vec::new();
    // Extend chains upward from minimal elements until maximal.
    fn extend(p: &Poset, chain: &mut Vec<usize>, out: &mut Vec<Vec<String>>) {
        let last = *chain.last().unwrap();
        let n = p.len();
        let covers: Vec<usize> = (0..n)
            .filter(|&b| {
                b != last
                    && p.leq(last, b)
                    && !(0..n).any(|c| c != last && c != b && p.leq(last, c) && p.leq(c, b))
            })
            .collect();
        if covers.is_empty() {
            out.push(chain.iter().map(|&i| p.elements()[i].clone()).collect());
            return;
        }
        for b in covers {
            chain.push(b);
            extend(p, chain, out);
            chain.pop();
        }
    }
    for a in 0..n {
        if (0..n).any(|b| b != a && p.leq(b, a)) {
            continue;
        }
        extend(p, &mut vec![a], &mut facets);
    }
    SimplicialComplex::new(&facets).expect("chains are nonempty")
}

/// Oriented simplicial homology in degrees `0..=d`.
pub fn simplicial_homology(
    k: &SimplicialComplex,
    d: usize,
    budget: &Budget,
) -> Result<HomologyResult, ResourceLimit> {
    let mut faces = k.faces();
    faces.resize(d + 2, Vec::new());
    let faces = &faces[..d + 2];
    budget.tick(
        "simplicial faces",
        faces.iter().map(Vec::len).sum::<usize>() as u64,
    )?;
    let ranks: Vec<usize> = faces.iter().map(Vec::len).collect();
    let boundaries = (1..faces.len())
        .map(|n| {
            let index: HashMap<&[usize], usize> = faces[n - 1]
                .iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect();
            let mut m = SparseMatrix::new(ranks[n - 1], ranks[n]);
            for (c, s) in faces[n].iter().enumerate() {
                let entries = (0..s.len()).map(|i| {
                    let mut face = s.clone();
                    face.remove(i);
                    (index[face.as_slice()], if i % 2 == 0 { 1 } else { -1 })
                });
                m.set_column(c, entries);
            }
            m
        })
        .collect();
    ChainComplex { ranks, boundaries }.homology(d, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::HomologyGroup;

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn point_and_edge() {
        let pt = SimplicialComplex::simplex(0);
        let h = simplicial_homology(&pt, 2, &b()).unwrap();
        assert_eq!(
            h.groups,
            vec![
                HomologyGroup::free(1),
                HomologyGroup::free(0),
                HomologyGroup::free(0)
            ]
        );
        let sd = barycentric_subdivide(&pt);
        assert_eq!(
            (sd.vertices().len(), sd.facets().len(), sd.dim()),
            (1, 1, 0)
        );
        let edge = SimplicialComplex::simplex(1);
        let (p, c) = face_poset(&edge);
        assert_eq!(p.len(), 3);
        assert_eq!(c.num_objects(), 3);
        let sd = barycentric_subdivide(&edge);
        assert_eq!(sd.vertices().len(), 3);
        assert_eq!(sd.facets().len(), 2);
    }

    #[test]
    fn triangle_boundary() {
        let k = SimplicialComplex::simplex_boundary(2);
        // By hand: ∂₁ has rank 2 on 3 edges, ∂₂ = 0 ⇒ H₀ = Z, H₁ = Z.
        let h = simplicial_homology(&k, 1, &b()).unwrap();
        assert_eq!(
            h.groups,
            vec![HomologyGroup::free(1), HomologyGroup::free(1)]
        );
        let (p, _) = face_poset(&k);
        assert_eq!(p.len(), 6);
        let sd = barycentric_subdivide(&k);
        assert_eq!((sd.vertices().len(), sd.facets().len()), (6, 6));
        assert!(sd.facets().iter().all(|f| f.len() == 2));
        assert_eq!(simplicial_homology(&sd, 1, &b()).unwrap(), h);
    }

    #[test]
    fn tetrahedron_boundary() {
        let k = SimplicialComplex::simplex_boundary(3);
        // ∂₁: 4×6 of rank 3, ∂₂: 6×4 of rank 3 ⇒ ker ∂₂ has rank 1, H₁ = 0, H₂ = Z.
        let h = simplicial_homology(&k, 2, &b()).unwrap();
        assert_eq!(
            h.groups,
            vec![
                HomologyGroup::free(1),
                HomologyGroup::free(0),
                HomologyGroup::free(1)
            ]
        );
        assert_eq!(face_poset(&k).0.len(), 14);
    }

    #[test]
    fn contained_facets_dropped() {
        let k = SimplicialComplex::new(&[vec!["a".into(), "b".into()], vec!["a".into()]]).unwrap();
        assert_eq!(k.facets().len(), 1);
        assert!(SimplicialComplex::new(&[vec![]]).is_err());
    }
}
