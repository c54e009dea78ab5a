//! Todd–Coxeter coset enumeration over the trivial subgroup (HLT strategy
//! with coincidence processing).

use std::collections::VecDeque;

use crate::budget::{Budget, ResourceLimit};
use crate::group::table::FiniteGroupTable;
use crate::group::word::{format_word, GroupPresentation, Letter, Word};

const NONE: usize = usize::MAX;

/// The group of a presentation as an explicit table, together with where
/// each generator lands. Element `0` is the identity; element names are
/// shortlex-least representative words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedGroup {
    pub table: FiniteGroupTable,
    pub generator_elements: Vec<usize>,
    pub representatives: Vec<Word>,
}

impl EnumeratedGroup {
    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn evaluate(&self, w: &[Letter]) -> usize {
        self.table.product(w.iter().map(|l| {
            let g = self.generator_elements[l.gen];
            if l.inv {
                self.table.inv(g)
            } else {
                g
            }
        }))
    }
}

struct Enumerator<'a> {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: usize,
    max_cosets: usize,
    budget: &'a Budget,
}

fn col(l: Letter) -> usize {
    2 * l.gen + l.inv as usize
}

fn inv_col(c: usize) -> usize {
    c ^ 1
}

impl Enumerator<'_> {
    fn rep(&mut self, mut k: usize) -> usize {
        let mut root = k;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn is_live(&self, k: usize) -> bool {
        self.parent[k] == k
    }

    fn define(&mut self, coset: usize, c: usize) -> Result<(), ResourceLimit> {
        if self.live >= self.max_cosets {
            return Err(ResourceLimit {
                what: "cosets".into(),
                used: self.live as u64 + 1,
                limit: self.max_cosets as u64,
            });
        }
        self.budget.tick("coset definitions", 1)?;
        let new = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(new);
        self.live += 1;
        self.table[coset][c] = new;
        self.table[new][inv_col(c)] = coset;
        Ok(())
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            self.live -= 1;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) -> Result<(), ResourceLimit> {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            self.budget.tick("coset coincidences", 1)?;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                self.table[d][inv_col(x)] = NONE;
                let (m, n) = (self.rep(g), self.rep(d));
                if self.table[m][x] != NONE {
                    let t = self.table[m][x];
                    self.merge(n, t, &mut queue);
                } else if self.table[n][inv_col(x)] != NONE {
                    let t = self.table[n][inv_col(x)];
                    self.merge(m, t, &mut queue);
                } else {
                    self.table[m][x] = n;
                    self.table[n][inv_col(x)] = m;
                }
            }
        }
        Ok(())
    }

    fn scan_and_fill(&mut self, coset: usize, w: &[usize]) -> Result<(), ResourceLimit> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (coset, coset);
        let (mut i, mut j) = (0isize, w.len() as isize - 1);
        loop {
            while i <= j && self.table[f][w[i as usize]] != NONE {
                f = self.table[f][w[i as usize]];
                i += 1;
            }
            if i > j {
                if f != coset {
                    self.coincidence(f, coset)?;
                }
                return Ok(());
            }
            while j >= i && self.table[b][inv_col(w[j as usize])] != NONE {
                b = self.table[b][inv_col(w[j as usize])];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b)?;
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.table[f][x] = b;
                self.table[b][inv_col(x)] = f;
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

/// Enumerates the cosets of the trivial subgroup. Fails with a resource
/// limit when more than `max_cosets` cosets are live at once.
pub fn coset_enumeration(
    p: &GroupPresentation,
    max_cosets: usize,
    budget: &Budget,
) -> Result<EnumeratedGroup, ResourceLimit> {
    let cols = 2 * p.generators.len();
    let relators: Vec<Vec<usize>> = p
        .relators
        .iter()
        .map(|r| r.iter().map(|&l| col(l)).collect())
        .collect();
    let mut e = Enumerator {
        cols,
        table: vec![vec![NONE; cols]],
        parent: vec![0],
        live: 1,
        max_cosets,
        budget,
    };
    let mut a = 0;
    while a < e.table.len() {
        for r in &relators {
            if !e.is_live(a) {
                break;
            }
            e.scan_and_fill(a, r)?;
        }
        for x in 0..cols {
            if e.is_live(a) && e.table[a][x] == NONE {
                e.define(a, x)?;
            }
        }
        a += 1;
    }
    Ok(standardize(&e, p))
}

/// Breadth-first renumbering from the identity coset; representative words
/// are the BFS tree paths.
fn standardize(e: &Enumerator<'_>, p: &GroupPresentation) -> EnumeratedGroup {
    let cols = e.cols;
    let mut number = vec![NONE; e.table.len()];
    let mut order = vec![0usize];
    let mut reps: Vec<Word> = vec![Vec::new()];
    number[0] = 0;
    let mut q = VecDeque::from([0usize]);
    while let Some(c) = q.pop_front() {
        for x in 0..cols {
            let d = e.table[c][x];
            debug_assert!(d != NONE && e.is_live(d), "coset table incomplete");
            if number[d] == NONE {
                number[d] = order.len();
                order.push(d);
                let mut w = reps[number[c]].clone();
                w.push(Letter {
                    gen: x / 2,
                    inv: x % 2 == 1,
                });
                reps.push(w);
                q.push_back(d);
            }
        }
    }
    let n = order.len();
    let act = |mut c: usize, w: &Word| {
        for &l in w {
            c = e.table[c][col(l)];
        }
        c
    };
    let mult: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| number[act(order[i], &reps[j])]).collect())
        .collect();
    let names = reps.iter().map(|w| format_word(&p.generators, w)).collect();
    let table = FiniteGroupTable::new(names, mult).expect("coset table yields a group");
    let generator_elements = (0..p.generators.len())
        .map(|g| number[e.table[0][2 * g]])
        .collect();
    EnumeratedGroup {
        table,
        generator_elements,
        representatives: reps,
    }
}
