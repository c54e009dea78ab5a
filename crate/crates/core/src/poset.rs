//! Finite posets and their categories.

#![allow(clippy::needless_range_loop)]

use thiserror::Error;

use crate::category::{validate_category, FiniteCategory, RawCategory};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("`{0}` and `{1}` are mutually below each other")]
    NotAntisymmetric(String, String),
}

/// A finite partial order, stored as a reflexive transitive relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Reflexive-transitive closure of the given pairs, then an antisymmetry check.
    pub fn from_relations(
        elements: &[String],
        pairs: &[(String, String)],
    ) -> Result<Self, PosetError> {
        let mut elements = elements.to_vec();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(PosetError::DuplicateElement(w[0].clone()));
        }
        let n = elements.len();
        let idx = |e: &str| {
            elements
                .binary_search_by(|x| x.as_str().cmp(e))
                .map_err(|_| PosetError::UnknownElement(e.to_string()))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            leq[idx(a)?][idx(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(PosetError::NotAntisymmetric(
                        elements[i].clone(),
                        elements[j].clone(),
                    ));
                }
            }
        }
        Ok(Self { elements, leq })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// All pairs `a ≤ b` including the reflexive ones.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| self.leq[a][b]).map(move |b| (a, b)))
            .collect()
    }

    /// Strict covering pairs `a ⋖ b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.relations()
            .into_iter()
            .filter(|&(a, b)| {
                a != b && !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b])
            })
            .collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.leq[i][i])
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| !(self.leq[i][j] && self.leq[j][k]) || self.leq[i][k]))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq[i][j] && self.leq[j][i])))
    }

    /// The category with one morphism `a<b` per strict relation.
    pub fn to_category(&self) -> FiniteCategory {
        let mut raw = RawCategory {
            objects: self.elements.clone(),
            ..Default::default()
        };
        let rel: Vec<(usize, usize)> = self
            .relations()
            .into_iter()
            .filter(|(a, b)| a != b)
            .collect();
        let name = |a: usize, b: usize| {
            if a == b {
                crate::category::identity_name(&self.elements[a])
            } else {
                format!("{}<{}", self.elements[a], self.elements[b])
            }
        };
        for &(a, b) in &rel {
            raw.morphism(name(a, b), &self.elements[a], &self.elements[b]);
        }
        for &(a, b) in &rel {
            for &(b2, c) in &rel {
                if b2 == b {
                    raw.composite(name(b, c), name(a, b), name(a, c));
                }
            }
        }
        validate_category(&raw).expect("poset category is valid")
    }

    /// Recovers the order from a category with at most one morphism per hom-set.
    pub fn from_category(c: &FiniteCategory) -> Option<Self> {
        let n = c.num_objects();
        let mut leq = vec![vec![false; n]; n];
        for a in c.object_indices() {
            for b in c.object_indices() {
                match c.hom(a, b).len() {
                    0 => {}
                    1 => leq[a.0][b.0] = true,
                    _ => return None,
                }
            }
        }
        let p = Self {
            elements: c.objects().to_vec(),
            leq,
        };
        p.is_antisymmetric().then_some(p)
    }
}
