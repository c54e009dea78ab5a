//! Tietze simplification: relator cleanup and generator elimination.

use std::collections::BTreeSet;

use crate::budget::Budget;
use crate::group::word::{cyclic_canonical, free_reduce, inverse, GroupPresentation, Letter, Word};

/// A simplified presentation together with the image of every original
/// generator as a word in the new generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TietzeResult {
    pub presentation: GroupPresentation,
    pub images: Vec<Word>,
    /// Set when the step budget ran out before a fixpoint.
    pub exhausted: bool,
}

impl TietzeResult {
    /// Rewrites a word over the original generators.
    pub fn translate(&self, w: &[Letter]) -> Word {
        let mut out = Vec::new();
        for l in w {
            let img = &self.images[l.gen];
            if l.inv {
                out.extend(inverse(img));
            } else {
                out.extend_from_slice(img);
            }
        }
        free_reduce(&out)
    }
}

/// Cyclically reduces relators and drops empty and duplicate ones (up to
/// rotation and inversion), keeping first occurrences in order.
fn clean(relators: &[Word]) -> Vec<Word> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in relators {
        let c = cyclic_canonical(r);
        if !c.is_empty() && seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

/// Simultaneous substitution; `by[g]` must only use generators left alone.
fn substitute_all(w: &[Letter], by: &[Option<Word>]) -> Word {
    let mut out = Vec::with_capacity(w.len());
    for &l in w {
        match &by[l.gen] {
            None => out.push(l),
            Some(r) if l.inv => out.extend(inverse(r)),
            Some(r) => out.extend_from_slice(r),
        }
    }
    free_reduce(&out)
}

/// Solves `r = 1` for the generator at position `i` (which occurs once).
fn solve(r: &[Letter], i: usize) -> Word {
    let (u, v) = (&r[..i], &r[i + 1..]);
    // u x v = 1 ⇒ x = u⁻¹ v⁻¹; u x⁻¹ v = 1 ⇒ x = v u.
    let w: Word = if r[i].inv {
        v.iter().chain(u).copied().collect()
    } else {
        inverse(u).into_iter().chain(inverse(v)).collect()
    };
    free_reduce(&w)
}

struct State {
    alive: Vec<bool>,
    images: Vec<Word>,
    rels: Vec<Word>,
}

impl State {
    fn apply(&mut self, by: &[Option<Word>], rels: Vec<Word>) {
        for (g, b) in by.iter().enumerate() {
            if b.is_some() {
                self.alive[g] = false;
            }
        }
        for img in self.images.iter_mut() {
            *img = substitute_all(img, by);
        }
        self.rels = rels;
    }

    /// Kills every generator that is a relator on its own.
    fn drop_trivial(&mut self) -> bool {
        let mut by: Vec<Option<Word>> = vec![None; self.alive.len()];
        for r in &self.rels {
            if r.len() == 1 {
                by[r[0].gen] = Some(Vec::new());
            }
        }
        if by.iter().all(Option::is_none) {
            return false;
        }
        let rels = clean(
            &self
                .rels
                .iter()
                .map(|r| substitute_all(r, &by))
                .collect::<Vec<_>>(),
        );
        self.apply(&by, rels);
        true
    }

    /// Identifies generators related by relators `x^±1 y^±1`, x ≠ y.
    fn merge_pairs(&mut self) -> bool {
        let n = self.alive.len();
        // parent[g] = (root-ward generator, sign): g = parent^sign.
        let mut parent: Vec<(usize, bool)> = (0..n).map(|g| (g, false)).collect();
        fn find(parent: &mut [(usize, bool)], g: usize) -> (usize, bool) {
            let (p, s) = parent[g];
            if p == g {
                return (g, false);
            }
            let (r, t) = find(parent, p);
            parent[g] = (r, s ^ t);
            (r, s ^ t)
        }
        let mut used = vec![false; self.rels.len()];
        let mut any = false;
        for (i, r) in self.rels.iter().enumerate() {
            if r.len() != 2 || r[0].gen == r[1].gen {
                continue;
            }
            let (rx, sx) = find(&mut parent, r[0].gen);
            let (ry, sy) = find(&mut parent, r[1].gen);
            if rx == ry {
                continue;
            }
            // x^a y^b = 1 with x = rx^sx, y = ry^sy ⇒ rx = ry^(sign).
            let sign = !(r[0].inv ^ sx ^ r[1].inv ^ sy);
            let (keep, lose) = (rx.min(ry), rx.max(ry));
            parent[lose] = (keep, sign);
            used[i] = true;
            any = true;
        }
        if !any {
            return false;
        }
        let by: Vec<Option<Word>> = (0..n)
            .map(|g| {
                let (r, s) = find(&mut parent, g);
                (r != g).then(|| vec![Letter { gen: r, inv: s }])
            })
            .collect();
        let rest: Vec<Word> = self
            .rels
            .iter()
            .zip(&used)
            .filter(|(_, &u)| !u)
            .map(|(r, _)| substitute_all(r, &by))
            .collect();
        let rels = clean(&rest);
        self.apply(&by, rels);
        true
    }
}

/// Eliminates generators until none occurs exactly once in a relator
/// without pushing the total relator length past that of the input.
/// Single-letter and two-letter relators are used first; then candidates
/// are tried shortest relator first, then by position.
pub fn tietze_simplify(p: &GroupPresentation, budget: &Budget) -> TietzeResult {
    let n = p.generators.len();
    let bound = p.total_length();
    let mut st = State {
        alive: vec![true; n],
        images: (0..n).map(|g| vec![Letter::pos(g)]).collect(),
        rels: clean(&p.relators),
    };
    let mut exhausted = false;
    'outer: loop {
        if budget.tick("tietze moves", 1).is_err() {
            exhausted = true;
            break;
        }
        if st.drop_trivial() || st.merge_pairs() {
            continue;
        }
        let mut order: Vec<usize> = (0..st.rels.len()).collect();
        order.sort_by_key(|&i| (st.rels[i].len(), i));
        for &ri in &order {
            let r = st.rels[ri].clone();
            let mut counts = vec![0usize; n];
            for l in &r {
                counts[l.gen] += 1;
            }
            for (i, l) in r.iter().enumerate() {
                if counts[l.gen] != 1 {
                    continue;
                }
                if budget.tick("tietze moves", 1).is_err() {
                    exhausted = true;
                    break 'outer;
                }
                let mut by: Vec<Option<Word>> = vec![None; n];
                by[l.gen] = Some(solve(&r, i));
                let next: Vec<Word> = st
                    .rels
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != ri)
                    .map(|(_, w)| substitute_all(w, &by))
                    .collect();
                let next = clean(&next);
                if next.iter().map(Vec::len).sum::<usize>() > bound {
                    continue;
                }
                st.apply(&by, next);
                continue 'outer;
            }
        }
        break;
    }
    let State {
        alive,
        images,
        rels,
    } = st;
    // Renumber surviving generators.
    let mut new_index = vec![usize::MAX; n];
    let mut generators = Vec::new();
    for g in 0..n {
        if alive[g] {
            new_index[g] = generators.len();
            generators.push(p.generators[g].clone());
        }
    }
    let renumber = |w: &Word| -> Word {
        w.iter()
            .map(|l| Letter {
                gen: new_index[l.gen],
                inv: l.inv,
            })
            .collect()
    };
    let relators = rels.iter().map(renumber).collect();
    let images = images.iter().map(renumber).collect();
    TietzeResult {
        presentation: GroupPresentation::new(generators, relators)
            .expect("renumbered relators use live generators"),
        images,
        exhausted,
    }
}
