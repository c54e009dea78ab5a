//! Fundamental group presentations of nerves and induced homomorphisms.
//!
//! Words are written in composition order: the letter sequence `g f` stands
//! for `g ∘ f`. A morphism `m: X → Y` of the basepoint component represents
//! the loop `γ_Y⁻¹ m γ_X`, where `γ` are tree paths from the basepoint.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::budget::{Budget, ResourceLimit};
use crate::category::{FiniteCategory, Mor, Obj};
use crate::functor::Functor;
use crate::group::word::{format_word, free_reduce, inverse};
use crate::group::{
    coset_enumeration, tietze_simplify, Abelianization, EnumeratedGroup, GroupPresentation, Letter,
    TietzeResult, Word,
};

#[derive(Clone, Debug)]
pub struct Pi1Presentation {
    pub category: Arc<FiniteCategory>,
    pub basepoint: Obj,
    /// Objects of the basepoint's component, sorted.
    pub component: Vec<Obj>,
    /// Generator `i` is the morphism `generators[i]`.
    pub generators: Vec<Mor>,
    pub tree: Vec<Mor>,
    pub presentation: GroupPresentation,
    gen_of: Vec<Option<usize>>,
    paths: Vec<Option<Word>>,
}

/// Breadth-first spanning tree over the undirected morphism graph; at each
/// object the incident non-identity morphisms are scanned in id order.
pub fn pi1_presentation(c: &Arc<FiniteCategory>, basepoint: Obj) -> Pi1Presentation {
    let mut paths: Vec<Option<Word>> = vec![None; c.num_objects()];
    let mut component = vec![basepoint];
    let mut tree = Vec::new();
    paths[basepoint.0] = Some(Vec::new());
    // Generator numbering needs the component first; record tree edges as morphisms.
    let mut tree_steps: Vec<(Obj, Mor, bool, Obj)> = Vec::new();
    let mut queue = VecDeque::from([basepoint]);
    let mut seen = vec![false; c.num_objects()];
    seen[basepoint.0] = true;
    while let Some(x) = queue.pop_front() {
        let mut incident: Vec<(Mor, bool, Obj)> = c
            .out_of(x)
            .iter()
            .map(|&m| (m, false, c.tgt(m)))
            .chain(c.incoming(x).iter().map(|&m| (m, true, c.src(m))))
            .filter(|(m, _, _)| !c.is_identity(*m))
            .collect();
        incident.sort();
        for (m, backwards, y) in incident {
            if !seen[y.0] {
                seen[y.0] = true;
                component.push(y);
                tree.push(m);
                tree_steps.push((x, m, backwards, y));
                queue.push_back(y);
            }
        }
    }
    component.sort();
    let generators: Vec<Mor> = c.non_identities().filter(|&m| seen[c.src(m).0]).collect();
    let mut gen_of = vec![None; c.num_morphisms()];
    for (i, &m) in generators.iter().enumerate() {
        gen_of[m.0] = Some(i);
    }
    for &(x, m, backwards, y) in &tree_steps {
        let g = gen_of[m.0].unwrap();
        let mut w = vec![Letter {
            gen: g,
            inv: backwards,
        }];
        w.extend(paths[x.0].clone().unwrap());
        paths[y.0] = Some(w);
    }
    let mut relators: Vec<Word> = tree
        .iter()
        .map(|m| vec![Letter::pos(gen_of[m.0].unwrap())])
        .collect();
    for &f in &generators {
        for &g in c.out_of(c.tgt(f)) {
            if c.is_identity(g) {
                continue;
            }
            let gf = c.compose_unchecked(g, f);
            let mut r = vec![
                Letter::pos(gen_of[g.0].unwrap()),
                Letter::pos(gen_of[f.0].unwrap()),
            ];
            if !c.is_identity(gf) {
                r.push(Letter::neg(gen_of[gf.0].unwrap()));
            }
            relators.push(r);
        }
    }
    let names = generators
        .iter()
        .map(|&m| c.mor_id(m).to_string())
        .collect();
    let presentation =
        GroupPresentation::new(names, relators).expect("relators use generators of the component");
    Pi1Presentation {
        category: c.clone(),
        basepoint,
        component,
        generators,
        tree,
        presentation,
        gen_of,
        paths,
    }
}

impl Pi1Presentation {
    pub fn generator(&self, m: Mor) -> Option<usize> {
        self.gen_of[m.0]
    }

    pub fn contains(&self, x: Obj) -> bool {
        self.paths[x.0].is_some()
    }

    /// Tree path from the basepoint to `x`, as a word.
    pub fn path(&self, x: Obj) -> Option<&Word> {
        self.paths[x.0].as_ref()
    }

    /// One-letter word of a morphism; identities give the empty word.
    pub fn letter(&self, m: Mor) -> Word {
        self.gen_of[m.0]
            .map(|g| vec![Letter::pos(g)])
            .unwrap_or_default()
    }

    /// The loop `γ_Y⁻¹ m γ_X` of a morphism in the component.
    pub fn loop_word(&self, m: Mor) -> Option<Word> {
        let c = &self.category;
        let (gx, gy) = (self.path(c.src(m))?, self.path(c.tgt(m))?);
        let mut w = inverse(gy);
        w.extend(self.letter(m));
        w.extend_from_slice(gx);
        Some(free_reduce(&w))
    }

    pub fn word_string(&self, w: &[Letter]) -> String {
        format_word(&self.presentation.generators, w)
    }

    /// Simplifies, abelianizes and tries to enumerate the group.
    pub fn identify(&self, max_cosets: usize, budget: &Budget) -> Result<Pi1Group, ResourceLimit> {
        let tietze = tietze_simplify(&self.presentation, budget);
        let abelianization = tietze.presentation.abelianization(budget)?;
        let group = coset_enumeration(&tietze.presentation, max_cosets, budget);
        Ok(Pi1Group {
            tietze,
            abelianization,
            group,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Pi1Group {
    pub tietze: TietzeResult,
    pub abelianization: Abelianization,
    pub group: Result<EnumeratedGroup, ResourceLimit>,
}

impl Pi1Group {
    pub fn order(&self) -> Option<usize> {
        self.group.as_ref().ok().map(EnumeratedGroup::order)
    }

    /// Element of a word over the original generators.
    pub fn evaluate(&self, w: &[Letter]) -> Option<usize> {
        let g = self.group.as_ref().ok()?;
        Some(g.evaluate(&self.tietze.translate(w)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Pi1Error {
    #[error("basepoint `{0}` is not in the domain")]
    DisconnectedBasepoint(String),
    #[error("path word does not run from `{from}` to `{to}`")]
    BadPath { from: String, to: String },
    #[error("image of relator {relator} is not provably trivial")]
    RelatorViolation { relator: String },
}

/// Generator images of an induced map on fundamental groups.
#[derive(Clone, Debug, Serialize)]
pub struct Pi1Hom {
    /// `images[i]` is a word over the codomain presentation's generators.
    #[serde(skip)]
    pub images: Vec<Word>,
    pub image_strings: Vec<(String, String)>,
    pub relators_checked: usize,
}

/// Signed morphisms of a word as a path in `c`, with identities dropped;
/// adjacent forward (or backward) letters are composed, inverse pairs
/// cancel, until nothing changes.
pub fn normalize_path(c: &FiniteCategory, p: &Pi1Presentation, w: &[Letter]) -> Word {
    let mut cur: Vec<(Mor, bool)> = w.iter().map(|l| (p.generators[l.gen], l.inv)).collect();
    loop {
        let mut next: Vec<(Mor, bool)> = Vec::with_capacity(cur.len());
        for &(m, inv) in &cur {
            if c.is_identity(m) {
                continue;
            }
            match next.last().copied() {
                Some((n, ninv)) if n == m && ninv != inv => {
                    next.pop();
                }
                // `n m` with both forward is `n ∘ m`; both backward `n⁻¹ m⁻¹ = (m ∘ n)⁻¹`.
                Some((n, false)) if !inv && c.src(n) == c.tgt(m) => {
                    next.pop();
                    next.push((c.compose_unchecked(n, m), false));
                }
                Some((n, true)) if inv && c.src(m) == c.tgt(n) => {
                    next.pop();
                    next.push((c.compose_unchecked(m, n), true));
                }
                _ => next.push((m, inv)),
            }
        }
        let next: Vec<(Mor, bool)> = next
            .into_iter()
            .filter(|(m, _)| !c.is_identity(*m))
            .collect();
        if next == cur {
            break;
        }
        cur = next;
    }
    cur.iter()
        .map(|&(m, inv)| Letter {
            gen: p.generator(m).expect("path stays in the component"),
            inv,
        })
        .collect()
}

/// `F_*: π₁(dom, x) → π₁(cod, F x)` or, given a path word `p` from `y` to
/// `F x` in the codomain presentation at `y`, into `π₁(cod, y)` by
/// conjugation with `p`.
pub fn induced_pi1_hom(
    f: &Functor,
    dom: &Pi1Presentation,
    cod: &Pi1Presentation,
    path_to_image: Option<&Word>,
) -> Result<Pi1Hom, Pi1Error> {
    let (c, d) = (f.dom(), f.cod());
    let image_base = f.on_obj(dom.basepoint);
    if !cod.contains(image_base) {
        return Err(Pi1Error::DisconnectedBasepoint(
            d.obj_id(image_base).to_string(),
        ));
    }
    let conj: Word = match path_to_image {
        Some(p) => {
            // Check the path runs from cod's basepoint to F(x).
            let mut at = cod.basepoint;
            for l in p.iter().rev() {
                let m = cod.generators[l.gen];
                let (s, t) = if l.inv {
                    (d.tgt(m), d.src(m))
                } else {
                    (d.src(m), d.tgt(m))
                };
                if s != at {
                    return Err(Pi1Error::BadPath {
                        from: d.obj_id(cod.basepoint).into(),
                        to: d.obj_id(image_base).into(),
                    });
                }
                at = t;
            }
            if at != image_base {
                return Err(Pi1Error::BadPath {
                    from: d.obj_id(cod.basepoint).into(),
                    to: d.obj_id(image_base).into(),
                });
            }
            p.clone()
        }
        None if image_base == cod.basepoint => Vec::new(),
        None => {
            return Err(Pi1Error::DisconnectedBasepoint(
                d.obj_id(image_base).to_string(),
            ))
        }
    };
    // Image of a dom path word: letterwise F.
    let image_of = |w: &[Letter]| -> Word {
        let mut out = Vec::new();
        for l in w {
            let m = f.on_mor(dom.generators[l.gen]);
            if let Some(g) = cod.generator(m) {
                out.push(Letter { gen: g, inv: l.inv });
            }
        }
        out
    };
    let mut images = Vec::with_capacity(dom.generators.len());
    for &m in &dom.generators {
        let loop_w = dom.loop_word(m).expect("generator lies in the component");
        // The loop's tree letters are dom generators too; map each letter.
        let mut w = inverse(&conj);
        w.extend(image_of(&loop_w));
        w.extend_from_slice(&conj);
        images.push(free_reduce(&w));
    }
    let substitute = |r: &[Letter]| -> Word {
        let mut out = Vec::new();
        for l in r {
            if l.inv {
                out.extend(inverse(&images[l.gen]));
            } else {
                out.extend_from_slice(&images[l.gen]);
            }
        }
        out
    };
    for r in &dom.presentation.relators {
        let img = substitute(r);
        if !normalize_path(d, cod, &img).is_empty() {
            return Err(Pi1Error::RelatorViolation {
                relator: dom.presentation.word_to_string(r),
            });
        }
    }
    let _ = c;
    let image_strings = dom
        .generators
        .iter()
        .zip(&images)
        .map(|(&m, w)| (dom.category.mor_id(m).to_string(), cod.word_string(w)))
        .collect();
    Ok(Pi1Hom {
        images,
        image_strings,
        relators_checked: dom.presentation.relators.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn present(c: FiniteCategory, base: &str) -> Pi1Presentation {
        let c = Arc::new(c);
        let b = c.obj(base).unwrap();
        pi1_presentation(&c, b)
    }

    #[test]
    fn bs2_presentation() {
        let p = present(zoo::cyclic_group(2), "o");
        assert_eq!(p.presentation.generators, vec!["g1"]);
        assert_eq!(p.presentation.relator_strings(), vec!["g1^2"]);
        assert!(p.tree.is_empty());
        let g = p.identify(100, &Budget::unlimited()).unwrap();
        assert_eq!(g.order(), Some(2));
        assert_eq!(g.abelianization, Abelianization::new(0, &[2]));
    }

    #[test]
    fn walking_arrow_is_simply_connected() {
        let p = present(zoo::walking_arrow(), "a");
        assert_eq!(p.tree.len(), 1);
        let g = p.identify(10, &Budget::unlimited()).unwrap();
        assert!(g.tietze.presentation.generators.is_empty());
        assert_eq!(g.order(), Some(1));
    }

    #[test]
    fn circle_poset_is_free_of_rank_one() {
        let p = present(zoo::circle_poset(), "a");
        let g = p.identify(100, &Budget::unlimited()).unwrap();
        assert_eq!(g.abelianization, Abelianization::new(1, &[]));
        assert!(g.group.is_err());
        assert_eq!(g.tietze.presentation.generators.len(), 1);
        assert!(g.tietze.presentation.relators.is_empty());
    }

    #[test]
    fn symmetric_groups() {
        for (n, order) in [(3, 6), (4, 24)] {
            let p = present(zoo::symmetric_group(n), "o");
            let g = p.identify(1000, &Budget::unlimited()).unwrap();
            assert_eq!(g.order(), Some(order));
            assert!(
                g.tietze.presentation.generators.len() <= 2,
                "{}",
                g.tietze.presentation
            );
        }
    }

    #[test]
    fn loops_evaluate_consistently() {
        let p = present(zoo::symmetric_group(3), "o");
        let g = p.identify(1000, &Budget::unlimited()).unwrap();
        let c = p.category.clone();
        for a in c.morphism_indices() {
            for b in c.morphism_indices() {
                let ab = c.compose_unchecked(a, b);
                let (wa, wb, wab) = (
                    p.loop_word(a).unwrap(),
                    p.loop_word(b).unwrap(),
                    p.loop_word(ab).unwrap(),
                );
                let t = &g.group.as_ref().unwrap().table;
                assert_eq!(
                    t.mul(g.evaluate(&wa).unwrap(), g.evaluate(&wb).unwrap()),
                    g.evaluate(&wab).unwrap()
                );
            }
        }
    }

    #[test]
    fn induced_homomorphisms() {
        let c = Arc::new(zoo::symmetric_group(3));
        let p = pi1_presentation(&c, Obj(0));
        let id = Functor::identity(c.clone());
        let h = induced_pi1_hom(&id, &p, &p, None).unwrap();
        for (i, w) in h.images.iter().enumerate() {
            assert_eq!(w, &vec![Letter::pos(i)]);
        }
        let pt = Arc::new(zoo::discrete(1));
        let q = pi1_presentation(&pt, Obj(0));
        let k = Functor::constant(c.clone(), pt, Obj(0));
        let h = induced_pi1_hom(&k, &p, &q, None).unwrap();
        assert!(h.images.iter().all(Vec::is_empty));
    }

    #[test]
    fn torsor_inclusion_is_an_isomorphism() {
        let (bg, tor, inc) = zoo::torsors(&crate::group::FiniteGroupTable::cyclic(3), "g");
        let p = pi1_presentation(&bg, Obj(0));
        let q = pi1_presentation(&tor, inc.on_obj(Obj(0)));
        let h = induced_pi1_hom(&inc, &p, &q, None).unwrap();
        let b = Budget::unlimited();
        let (gp, gq) = (p.identify(100, &b).unwrap(), q.identify(100, &b).unwrap());
        assert_eq!((gp.order(), gq.order()), (Some(3), Some(3)));
        let images: std::collections::BTreeSet<usize> = p
            .generators
            .iter()
            .map(|&m| gq.evaluate(&h.images[p.generator(m).unwrap()]).unwrap())
            .collect();
        assert_eq!(images.len(), 2);
        assert!(!images.contains(&0));
    }
}
