//! Exhaustive deciders for properties of finite categories.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::budget::{Budget, ResourceLimit};
use crate::category::{FiniteCategory, Mor, Obj};
use crate::derive::opposite;
use crate::report::{PropertyReport, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CategoryProperty {
    AllMono,
    Initial,
    Terminal,
    Filtered,
    #[serde(rename = "JEP")]
    Jep,
    #[serde(rename = "AP")]
    Ap,
    BinaryCoproducts,
    BinaryProducts,
    Pushouts,
    Pullbacks,
    RightFractions,
}

impl CategoryProperty {
    pub const ALL: [CategoryProperty; 11] = [
        Self::AllMono,
        Self::Initial,
        Self::Terminal,
        Self::Filtered,
        Self::Jep,
        Self::Ap,
        Self::BinaryCoproducts,
        Self::BinaryProducts,
        Self::Pushouts,
        Self::Pullbacks,
        Self::RightFractions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::AllMono => "AllMono",
            Self::Initial => "Initial",
            Self::Terminal => "Terminal",
            Self::Filtered => "Filtered",
            Self::Jep => "JEP",
            Self::Ap => "AP",
            Self::BinaryCoproducts => "BinaryCoproducts",
            Self::BinaryProducts => "BinaryProducts",
            Self::Pushouts => "Pushouts",
            Self::Pullbacks => "Pullbacks",
            Self::RightFractions => "RightFractions",
        }
    }
}

impl fmt::Display for CategoryProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CategoryProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

type Search = Result<PropertyReport, ResourceLimit>;

pub fn check_category_property(
    c: &FiniteCategory,
    prop: CategoryProperty,
    budget: &Budget,
) -> PropertyReport {
    let name = prop.name();
    let result = match prop {
        CategoryProperty::AllMono => all_mono(c, budget),
        CategoryProperty::Initial => initial(c, budget),
        CategoryProperty::Terminal => terminal(c, budget),
        CategoryProperty::Filtered => filtered(c, budget),
        CategoryProperty::Jep => jep(c, budget),
        CategoryProperty::Ap => ap(c, budget),
        CategoryProperty::BinaryCoproducts => coproducts(c, budget, false),
        CategoryProperty::BinaryProducts => coproducts(&opposite(c), budget, true),
        CategoryProperty::Pushouts => pushouts(c, budget, false),
        CategoryProperty::Pullbacks => pushouts(&opposite(c), budget, true),
        CategoryProperty::RightFractions => right_fractions(c, budget),
    };
    match result {
        Ok(mut r) => {
            r.property = name.to_string();
            r
        }
        Err(e) => PropertyReport::resource_limit(name, &e),
    }
}

fn o(c: &FiniteCategory, x: Obj) -> String {
    c.obj_id(x).to_string()
}

fn m(c: &FiniteCategory, f: Mor) -> String {
    c.mor_id(f).to_string()
}

fn all_mono(c: &FiniteCategory, budget: &Budget) -> Search {
    if let Some((f, g, h)) = non_mono_triple(c, budget)? {
        let w = Witness::new("not_monic")
            .with("morphism", m(c, f))
            .with("left", m(c, g))
            .with("right", m(c, h));
        return Ok(PropertyReport::fails("", w));
    }
    Ok(PropertyReport::holds("", None))
}

/// First `(f, g, h)` with `g ≠ h` and `f∘g = f∘h`.
fn non_mono_triple(
    c: &FiniteCategory,
    budget: &Budget,
) -> Result<Option<(Mor, Mor, Mor)>, ResourceLimit> {
    for f in c.morphism_indices() {
        let x = c.src(f);
        for w in c.object_indices() {
            let hom = c.hom(w, x);
            budget.tick("mono check", hom.len() as u64)?;
            let mut seen: Vec<(Mor, Mor)> = Vec::with_capacity(hom.len());
            for &g in hom {
                let fg = c.compose_unchecked(f, g);
                if let Some(&(_, h)) = seen.iter().find(|(k, _)| *k == fg) {
                    return Ok(Some((f, h, g)));
                }
                seen.push((fg, g));
            }
        }
    }
    Ok(None)
}

fn initial(c: &FiniteCategory, budget: &Budget) -> Search {
    universal_object(c, budget, false)
}

fn terminal(c: &FiniteCategory, budget: &Budget) -> Search {
    universal_object(c, budget, true)
}

/// Initial object (or terminal when `into` is set): unique morphism to
/// (from) every object.
fn universal_object(c: &FiniteCategory, budget: &Budget, into: bool) -> Search {
    let label = if into { "terminal" } else { "initial" };
    if c.is_empty() {
        return Ok(PropertyReport::fails("", Witness::new("empty_category")));
    }
    let mut obstructions = Vec::new();
    for cand in c.object_indices() {
        budget.tick("universal object search", c.num_objects() as u64)?;
        let bad = c.object_indices().find(|&x| {
            let n = if into {
                c.hom(x, cand).len()
            } else {
                c.hom(cand, x).len()
            };
            n != 1
        });
        match bad {
            None => {
                let w = Witness::new(format!("{label}_object")).with("object", o(c, cand));
                return Ok(PropertyReport::holds("", Some(w)));
            }
            Some(x) => {
                let n = if into {
                    c.hom(x, cand).len()
                } else {
                    c.hom(cand, x).len()
                };
                obstructions
                    .push(json!({"candidate": o(c, cand), "object": o(c, x), "hom_size": n}));
            }
        }
    }
    let w = Witness::new(format!("no_{label}_object")).with("obstructions", obstructions);
    Ok(PropertyReport::fails("", w))
}

/// A common upper bound of `x` and `y`, if any.
fn joint_target(c: &FiniteCategory, x: Obj, y: Obj) -> Option<Obj> {
    c.object_indices()
        .find(|&z| !c.hom(x, z).is_empty() && !c.hom(y, z).is_empty())
}

fn pair_witness(c: &FiniteCategory, x: Obj, y: Obj) -> Witness {
    Witness::new("pair_without_cocone")
        .with("case", "pair")
        .with("left", o(c, x))
        .with("right", o(c, y))
}

fn jep(c: &FiniteCategory, budget: &Budget) -> Search {
    for x in c.object_indices() {
        for y in c.object_indices().filter(|&y| y > x) {
            budget.tick("joint embedding", c.num_objects() as u64)?;
            if joint_target(c, x, y).is_none() {
                return Ok(PropertyReport::fails("", pair_witness(c, x, y)));
            }
        }
    }
    Ok(PropertyReport::holds("", None))
}

/// Checks the empty, discrete-pair and parallel-pair cocone cases.
fn filtered(c: &FiniteCategory, budget: &Budget) -> Search {
    if c.is_empty() {
        return Ok(PropertyReport::fails(
            "",
            Witness::new("empty_category").with("case", "empty"),
        ));
    }
    let mut pairs = 0u64;
    for x in c.object_indices() {
        for y in c.object_indices().filter(|&y| y > x) {
            budget.tick("filtered pair", c.num_objects() as u64)?;
            pairs += 1;
            if joint_target(c, x, y).is_none() {
                return Ok(PropertyReport::fails("", pair_witness(c, x, y)));
            }
        }
    }
    let mut parallel = 0u64;
    for x in c.object_indices() {
        for y in c.object_indices() {
            let hom = c.hom(x, y);
            for (i, &f) in hom.iter().enumerate() {
                for &g in &hom[i + 1..] {
                    parallel += 1;
                    budget.tick("filtered parallel pair", c.out_of(y).len() as u64)?;
                    let coeq = c
                        .out_of(y)
                        .iter()
                        .any(|&h| c.compose_unchecked(h, f) == c.compose_unchecked(h, g));
                    if !coeq {
                        let w = Witness::new("parallel_pair_without_cocone")
                            .with("case", "parallel")
                            .with("left", m(c, f))
                            .with("right", m(c, g));
                        return Ok(PropertyReport::fails("", w));
                    }
                }
            }
        }
    }
    let w = Witness::new("cocone_cases")
        .with("pairs", pairs)
        .with("parallel_pairs", parallel);
    Ok(PropertyReport::holds("", Some(w)))
}

/// Legs `(u, v)` with `u∘f = v∘g`, searching targets in id order.
pub fn span_amalgam(c: &FiniteCategory, f: Mor, g: Mor) -> Option<(Mor, Mor)> {
    let (b, cc) = (c.tgt(f), c.tgt(g));
    for d in c.object_indices() {
        for &u in c.hom(b, d) {
            let uf = c.compose_unchecked(u, f);
            if let Some(&v) = c
                .hom(cc, d)
                .iter()
                .find(|&&v| c.compose_unchecked(v, g) == uf)
            {
                return Some((u, v));
            }
        }
    }
    None
}

/// Spans `(f, g)` out of each object with `f ≤ g` in id order.
pub fn spans(c: &FiniteCategory) -> Vec<(Mor, Mor)> {
    let mut out = Vec::new();
    for a in c.object_indices() {
        let outs = c.out_of(a);
        for (i, &f) in outs.iter().enumerate() {
            for &g in &outs[i..] {
                out.push((f.min(g), f.max(g)));
            }
        }
    }
    out.sort();
    out
}

fn span_witness(c: &FiniteCategory, kind: &str, f: Mor, g: Mor) -> Witness {
    Witness::new(kind)
        .with("apex", o(c, c.src(f)))
        .with("left", m(c, f))
        .with("right", m(c, g))
}

fn ap(c: &FiniteCategory, budget: &Budget) -> Search {
    for (f, g) in spans(c) {
        budget.tick("amalgamation", c.num_morphisms() as u64)?;
        if f != g && span_amalgam(c, f, g).is_none() {
            return Ok(PropertyReport::fails(
                "",
                span_witness(c, "span_without_amalgam", f, g),
            ));
        }
    }
    Ok(PropertyReport::holds("", None))
}

/// Binary coproducts (products when run on the opposite).
fn coproducts(c: &FiniteCategory, budget: &Budget, dual: bool) -> Search {
    let kind = if dual {
        "pair_without_product"
    } else {
        "pair_without_coproduct"
    };
    for x in c.object_indices() {
        for y in c.object_indices().filter(|&y| y >= x) {
            if find_coproduct(c, x, y, budget)?.is_none() {
                let w = Witness::new(kind)
                    .with("left", o(c, x))
                    .with("right", o(c, y));
                return Ok(PropertyReport::fails("", w));
            }
        }
    }
    Ok(PropertyReport::holds("", None))
}

/// `(P, i, j)` such that `hom(P, Z) → hom(X, Z) × hom(Y, Z)` is bijective for all `Z`.
pub fn find_coproduct(
    c: &FiniteCategory,
    x: Obj,
    y: Obj,
    budget: &Budget,
) -> Result<Option<(Obj, Mor, Mor)>, ResourceLimit> {
    for p in c.object_indices() {
        for &i in c.hom(x, p) {
            for &j in c.hom(y, p) {
                budget.tick("coproduct candidates", c.num_objects() as u64)?;
                let universal = c.object_indices().all(|z| {
                    let hp = c.hom(p, z);
                    if hp.len() != c.hom(x, z).len() * c.hom(y, z).len() {
                        return false;
                    }
                    let mut images: Vec<(Mor, Mor)> = hp
                        .iter()
                        .map(|&u| (c.compose_unchecked(u, i), c.compose_unchecked(u, j)))
                        .collect();
                    images.sort();
                    images.dedup();
                    images.len() == hp.len()
                });
                if universal {
                    return Ok(Some((p, i, j)));
                }
            }
        }
    }
    Ok(None)
}

/// Pushouts of every span (pullbacks when run on the opposite).
fn pushouts(c: &FiniteCategory, budget: &Budget, dual: bool) -> Search {
    let kind = if dual {
        "cospan_without_pullback"
    } else {
        "span_without_pushout"
    };
    for (f, g) in spans(c) {
        if find_pushout(c, f, g, budget)?.is_none() {
            return Ok(PropertyReport::fails("", span_witness(c, kind, f, g)));
        }
    }
    Ok(PropertyReport::holds("", None))
}

/// A cocone `(P, u, v)` on `f, g` through which every other cocone factors uniquely.
pub fn find_pushout(
    c: &FiniteCategory,
    f: Mor,
    g: Mor,
    budget: &Budget,
) -> Result<Option<(Obj, Mor, Mor)>, ResourceLimit> {
    let (b, cc) = (c.tgt(f), c.tgt(g));
    let cocones = |z: Obj| -> Vec<(Mor, Mor)> {
        let mut out = Vec::new();
        for &s in c.hom(b, z) {
            let sf = c.compose_unchecked(s, f);
            for &t in c.hom(cc, z) {
                if c.compose_unchecked(t, g) == sf {
                    out.push((s, t));
                }
            }
        }
        out
    };
    let all: Vec<Vec<(Mor, Mor)>> = c.object_indices().map(cocones).collect();
    for p in c.object_indices() {
        for &(u, v) in &all[p.0] {
            budget.tick("pushout candidates", c.num_objects() as u64)?;
            let universal = c.object_indices().all(|z| {
                let hp = c.hom(p, z);
                if hp.len() != all[z.0].len() {
                    return false;
                }
                let mut images: Vec<(Mor, Mor)> = hp
                    .iter()
                    .map(|&w| (c.compose_unchecked(w, u), c.compose_unchecked(w, v)))
                    .collect();
                images.sort();
                images.dedup();
                images.len() == hp.len()
            });
            if universal {
                return Ok(Some((p, u, v)));
            }
        }
    }
    Ok(None)
}

/// (1) every cospan has a commuting cone; (2) `f u = f v` implies `u g = v g`
/// for some `g`. When every morphism is monic, (2) holds with `g` an identity.
fn right_fractions(c: &FiniteCategory, budget: &Budget) -> Search {
    let op = opposite(c);
    for (x, y) in spans(&op) {
        budget.tick("cospan cones", c.num_morphisms() as u64)?;
        if x != y && span_amalgam(&op, x, y).is_none() {
            let w = Witness::new("cospan_without_cone")
                .with("condition", 1)
                .with("apex", o(c, c.tgt(x)))
                .with("left", m(c, x))
                .with("right", m(c, y));
            return Ok(PropertyReport::fails("", w));
        }
    }
    let mono = non_mono_triple(c, budget)?.is_none();
    let mut equalized = 0u64;
    for f in c.morphism_indices() {
        let x = c.src(f);
        for w in c.object_indices() {
            let hom = c.hom(w, x);
            for (i, &u) in hom.iter().enumerate() {
                for &v in &hom[i + 1..] {
                    budget.tick("right fractions", 1)?;
                    if c.compose_unchecked(f, u) != c.compose_unchecked(f, v) {
                        continue;
                    }
                    assert!(!mono, "distinct morphisms equalized by a monomorphism");
                    equalized += 1;
                    let found = c
                        .morphism_indices()
                        .filter(|&g| c.tgt(g) == w)
                        .any(|g| c.compose_unchecked(u, g) == c.compose_unchecked(v, g));
                    if !found {
                        let wit = Witness::new("pair_not_equalized")
                            .with("condition", 2)
                            .with("morphism", m(c, f))
                            .with("left", m(c, u))
                            .with("right", m(c, v));
                        return Ok(PropertyReport::fails("", wit));
                    }
                }
            }
        }
    }
    let cert = if mono {
        Witness::new("right_fractions").with(
            "condition_2",
            "vacuous: every morphism is monic, g = identity",
        )
    } else {
        Witness::new("right_fractions").with("equalized_pairs", equalized)
    };
    Ok(PropertyReport::holds("", Some(cert)))
}

/// Verdict shorthand used by other modules.
pub fn holds(c: &FiniteCategory, prop: CategoryProperty, budget: &Budget) -> Verdict {
    check_category_property(c, prop, budget).verdict
}
