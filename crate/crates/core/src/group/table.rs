//! Finite groups as explicit multiplication tables.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("multiplication table is not {0}×{0}")]
    NotSquare(usize),
    #[error("table entry out of range")]
    OutOfRange,
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("`{0}` has no inverse")]
    NoInverse(String),
    #[error("associativity fails for (`{0}`, `{1}`, `{2}`)")]
    NotAssociative(String, String, String),
}

/// `mult[a][b]` is the product `a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroupTable {
    elements: Vec<String>,
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupTable {
    pub fn new(elements: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = elements.len();
        if mult.len() != n || mult.iter().any(|r| r.len() != n) {
            return Err(GroupError::NotSquare(n));
        }
        if mult.iter().flatten().any(|&x| x >= n) {
            return Err(GroupError::OutOfRange);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mult[e][a] == a && mult[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| mult[a][b] == identity && mult[b][a] == identity)
                    .ok_or_else(|| GroupError::NoInverse(elements[a].clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a][b];
                for c in 0..n {
                    if mult[ab][c] != mult[a][mult[b][c]] {
                        return Err(GroupError::NotAssociative(
                            elements[a].clone(),
                            elements[b].clone(),
                            elements[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(Self {
            elements,
            mult,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::new(vec!["e".into()], vec![vec![0]]).unwrap()
    }

    /// Z/n with elements `0..n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let mult = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::new(names, mult).unwrap()
    }

    /// Sₙ on permutations in lexicographic one-line order; `(σ·τ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index: BTreeMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mult = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                        index[&st]
                    })
                    .collect()
            })
            .collect();
        let names = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect())
            .collect();
        Self::new(names, mult).unwrap()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn product(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter()
            .fold(self.identity, |acc, x| self.mult[acc][x])
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mult[x][a];
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mult[a][b] == self.mult[b][a]))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mult[x][g];
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let mut inside = vec![false; self.order()];
        for &x in h {
            inside[x] = true;
        }
        inside[self.identity]
            && h.iter()
                .all(|&a| inside[self.inverse[a]] && h.iter().all(|&b| inside[self.mult[a][b]]))
    }

    /// A pair `(h, g)` with `g h g⁻¹ ∉ H`, if `H` is not normal.
    pub fn normality_witness(&self, h: &[usize]) -> Option<(usize, usize)> {
        let mut inside = vec![false; self.order()];
        for &x in h {
            inside[x] = true;
        }
        for &x in h {
            for g in 0..self.order() {
                if !inside[self.mult[self.mult[g][x]][self.inverse[g]]] {
                    return Some((x, g));
                }
            }
        }
        None
    }

    /// Normal closure of the subgroup generated by `gens`.
    pub fn normal_closure(&self, gens: &[usize]) -> Vec<usize> {
        let conj: Vec<usize> = gens
            .iter()
            .flat_map(|&x| (0..self.order()).map(move |g| (g, x)))
            .map(|(g, x)| self.mult[self.mult[g][x]][self.inverse[g]])
            .collect();
        self.generated_subgroup(&conj)
    }

    /// Quotient by a normal subgroup. Cosets are numbered by their least
    /// element; elements of the quotient are named after that representative.
    pub fn quotient(&self, normal: &[usize]) -> Quotient {
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for a in 0..n {
            if coset_of[a] != usize::MAX {
                continue;
            }
            for &h in normal {
                coset_of[self.mult[a][h]] = reps.len();
            }
            reps.push(a);
        }
        let mult = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[self.mult[a][b]]).collect())
            .collect();
        let names = reps
            .iter()
            .map(|&a| format!("[{}]", self.elements[a]))
            .collect();
        let table =
            FiniteGroupTable::new(names, mult).expect("quotient by a normal subgroup is a group");
        Quotient {
            table,
            coset_of,
            representatives: reps,
        }
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let n = self.order();
        let comms: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.product([a, b, self.inverse[a], self.inverse[b]]))
            .collect();
        self.generated_subgroup(&comms)
    }

    /// Invariant factors `d₁ | d₂ | …` (all > 1) of the abelianization.
    pub fn abelian_invariants(&self) -> Vec<u64> {
        let ab = self.quotient(&self.commutator_subgroup()).table;
        abelian_group_invariants(&ab)
    }

    /// An isomorphism `self → other` as an element map, if one exists.
    /// Generators of `self` are chosen greedily and mapped by backtracking.
    pub fn find_isomorphism(&self, other: &FiniteGroupTable) -> Option<Vec<usize>> {
        if self.order() != other.order() {
            return None;
        }
        let mut orders_a: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        let mut orders_b: Vec<usize> = (0..other.order()).map(|a| other.element_order(a)).collect();
        let (oa, ob) = (orders_a.clone(), orders_b.clone());
        orders_a.sort_unstable();
        orders_b.sort_unstable();
        if orders_a != orders_b {
            return None;
        }
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        while span.len() < self.order() {
            let g = (0..self.order())
                .find(|x| span.binary_search(x).is_err())
                .unwrap();
            gens.push(g);
            span = self.generated_subgroup(&gens);
        }
        let mut images = Vec::new();
        self.extend_iso(other, &gens, &oa, &ob, &mut images)
    }

    fn extend_iso(
        &self,
        other: &FiniteGroupTable,
        gens: &[usize],
        oa: &[usize],
        ob: &[usize],
        images: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if images.len() == gens.len() {
            return self
                .homomorphism_from_generators(other, gens, images)
                .filter(|m| {
                    let mut seen = vec![false; other.order()];
                    m.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
                });
        }
        let g = gens[images.len()];
        for y in 0..other.order() {
            if ob[y] != oa[g] {
                continue;
            }
            images.push(y);
            if let Some(m) = self.extend_iso(other, gens, oa, ob, images) {
                return Some(m);
            }
            images.pop();
        }
        None
    }

    /// Extends `gens[i] ↦ images[i]` to a homomorphism, if consistent.
    pub fn homomorphism_from_generators(
        &self,
        other: &FiniteGroupTable,
        gens: &[usize],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[self.identity] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &y) in gens.iter().zip(images) {
                let xg = self.mult[x][g];
                let img = other.mult[map[x]][y];
                if map[xg] == usize::MAX {
                    map[xg] = img;
                    queue.push_back(xg);
                } else if map[xg] != img {
                    return None;
                }
            }
        }
        if map.contains(&usize::MAX) {
            return None;
        }
        let n = self.order();
        let ok = (0..n).all(|a| (0..n).all(|b| map[self.mult[a][b]] == other.mult[map[a]][map[b]]));
        ok.then_some(map)
    }

    pub fn is_isomorphic(&self, other: &FiniteGroupTable) -> bool {
        self.find_isomorphism(other).is_some()
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            order: self.order(),
            abelian_invariants: self.abelian_invariants(),
            abelian: self.is_abelian(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub table: FiniteGroupTable,
    pub coset_of: Vec<usize>,
    pub representatives: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian_invariants: Vec<u64>,
    pub abelian: bool,
}

/// Invariant factors of a finite abelian group, from counts of p-power torsion.
fn abelian_group_invariants(g: &FiniteGroupTable) -> Vec<u64> {
    let n = g.order() as u64;
    let mut elementary: Vec<(u64, Vec<u32>)> = Vec::new();
    for p in prime_factors(n) {
        // |G[p^k]| = p^(Σ min(k, eᵢ)); differences give the partition conjugate.
        let mut sizes = vec![1u64];
        let mut k = 1u32;
        loop {
            let pk = p.pow(k);
            let count = (0..g.order())
                .filter(|&a| pk % g.element_order(a) as u64 == 0)
                .count() as u64;
            sizes.push(count);
            if count == sizes[sizes.len() - 2] {
                break;
            }
            k += 1;
        }
        let logs: Vec<u32> = sizes.iter().map(|&s| s.ilog(p)).collect();
        // r_k = number of cyclic factors of exponent ≥ k.
        let r: Vec<u32> = logs
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|&x| x > 0)
            .collect();
        let mut exps = Vec::new();
        for (i, &ri) in r.iter().enumerate() {
            let next = r.get(i + 1).copied().unwrap_or(0);
            exps.extend(std::iter::repeat_n(i as u32 + 1, (ri - next) as usize));
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        elementary.push((p, exps));
    }
    let len = elementary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut inv: Vec<u64> = (0..len)
        .map(|i| {
            elementary
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&k| p.pow(k)))
                .product()
        })
        .collect();
    inv.reverse();
    inv
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
