//! Functor properties, functorial joint embeddings and the universality /
//! homogeneity pair for a chosen object.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::budget::{Budget, ResourceLimit};
use crate::category::{FiniteCategory, Mor, Obj};
use crate::derive::product_with_projections;
use crate::functor::{Functor, FunctorError, NaturalTransformation};
use crate::report::{PropertyReport, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FunctorProperty {
    Valid,
    Fibration,
    Opfibration,
}

impl FunctorProperty {
    pub const ALL: [FunctorProperty; 3] = [Self::Valid, Self::Fibration, Self::Opfibration];

    pub fn name(self) -> &'static str {
        match self {
            Self::Valid => "Valid",
            Self::Fibration => "Fibration",
            Self::Opfibration => "Opfibration",
        }
    }
}

impl fmt::Display for FunctorProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctorProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown functor property `{s}`"))
    }
}

pub fn functor_error_witness(e: &FunctorError) -> Witness {
    let w = Witness::new("invalid_functor").with("error", e.to_string());
    match e {
        FunctorError::BrokenComposition { g, f } => w.with("g", g.clone()).with("f", f.clone()),
        FunctorError::BrokenIdentity { object } => w.with("object", object.clone()),
        FunctorError::BrokenEndpoints { morphism } => w.with("morphism", morphism.clone()),
        _ => w,
    }
}

pub fn check_functor_property(
    f: &Functor,
    prop: FunctorProperty,
    budget: &Budget,
) -> PropertyReport {
    let name = prop.name();
    if let Some(e) = f.find_violation() {
        return PropertyReport::fails(name, functor_error_witness(&e));
    }
    let result = match prop {
        FunctorProperty::Valid => Ok(PropertyReport::holds(name, None)),
        FunctorProperty::Fibration => cartesian_lifts(f, budget, false),
        FunctorProperty::Opfibration => cartesian_lifts(&f.opposite(), budget, true),
    };
    match result {
        Ok(mut r) => {
            r.property = name.to_string();
            r
        }
        Err(e) => PropertyReport::resource_limit(name, &e),
    }
}

/// `φ: E' → E` over `u` is cartesian when every `ψ: E'' → E` with
/// `F ψ = u ∘ g` factors as `φ ∘ χ` for a unique `χ` over `g`.
fn is_cartesian(f: &Functor, phi: Mor, u: Mor, budget: &Budget) -> Result<bool, ResourceLimit> {
    let (c, d) = (f.dom(), f.cod());
    let (e1, e) = (c.src(phi), c.tgt(phi));
    for e2 in c.object_indices() {
        let lifts_of: Vec<Mor> = c.hom(e2, e1).to_vec();
        for &psi in c.hom(e2, e) {
            for &g in d.hom(f.on_obj(e2), d.src(u)) {
                budget.tick("cartesian lifts", lifts_of.len() as u64 + 1)?;
                if d.compose_unchecked(u, g) != f.on_mor(psi) {
                    continue;
                }
                let n = lifts_of
                    .iter()
                    .filter(|&&chi| f.on_mor(chi) == g && c.compose_unchecked(phi, chi) == psi)
                    .count();
                if n != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn cartesian_lifts(
    f: &Functor,
    budget: &Budget,
    dual: bool,
) -> Result<PropertyReport, ResourceLimit> {
    let (c, d) = (f.dom(), f.cod());
    let mut checked = 0u64;
    for u in d.morphism_indices() {
        for e in c.object_indices().filter(|&e| f.on_obj(e) == d.tgt(u)) {
            checked += 1;
            let mut found = None;
            for &phi in c.incoming(e) {
                if f.on_mor(phi) == u && is_cartesian(f, phi, u, budget)? {
                    found = Some(phi);
                    break;
                }
            }
            if found.is_none() {
                let kind = if dual {
                    "no_cocartesian_lift"
                } else {
                    "no_cartesian_lift"
                };
                let w = Witness::new(kind)
                    .with("morphism", d.mor_id(u))
                    .with("object", c.obj_id(e));
                return Ok(PropertyReport::fails("", w));
            }
        }
    }
    let kind = if dual {
        "cocartesian_lifts"
    } else {
        "cartesian_lifts"
    };
    Ok(PropertyReport::holds(
        "",
        Some(Witness::new(kind).with("pairs_checked", checked)),
    ))
}

/// `F: C × C → C` with `ι₁: π₁ ⇒ F` and `ι₂: π₂ ⇒ F`. On success the
/// certificate records that `|C|` is contractible.
pub fn check_functorial_joint_embedding(
    c: &Arc<FiniteCategory>,
    f: &Functor,
    i1: &NaturalTransformation,
    i2: &NaturalTransformation,
) -> Result<PropertyReport, FunctorError> {
    const NAME: &str = "FunctorialJointEmbedding";
    if c.is_empty() {
        return Ok(PropertyReport::fails(NAME, Witness::new("empty_category")));
    }
    let (prod, p1, p2) = product_with_projections(c, c);
    if **f.dom() != *prod || **f.cod() != **c {
        return Err(FunctorError::ShapeMismatch(
            "F must be a functor C × C → C".into(),
        ));
    }
    for (i, t, p) in [(1, i1, &p1), (2, i2, &p2)] {
        if **t.source() != *p || **t.target() != *f {
            return Err(FunctorError::ShapeMismatch(format!(
                "ι{i} must go from the projection π{i} to F"
            )));
        }
    }
    if let Some(e) = f.find_violation() {
        return Ok(PropertyReport::fails(NAME, functor_error_witness(&e)));
    }
    for (i, t) in [(1, i1), (2, i2)] {
        if let Some(sq) = t.broken_square() {
            let w = Witness::new("broken_square")
                .with("transformation", format!("ι{i}"))
                .with("morphism", prod.mor_id(sq.morphism))
                .with("left", f.cod().mor_id(sq.left))
                .with("right", f.cod().mor_id(sq.right));
            return Ok(PropertyReport::fails(NAME, w));
        }
    }
    let cert = Witness::new("contractible").with(
        "reason",
        "functorial joint embedding: id ≃ F(−, x₀) ≃ constant",
    );
    Ok(PropertyReport::holds(NAME, Some(cert)))
}

/// Universality (every object of `C₀` maps to `U`) and strong homogeneity
/// (any two maps `M → U` from `M ∈ C₀` differ by an automorphism of `U`).
pub fn monster_report(c: &FiniteCategory, c0: &[Obj], u: Obj) -> (PropertyReport, PropertyReport) {
    let mut c0 = c0.to_vec();
    c0.sort();
    c0.dedup();
    let universal = match c0.iter().find(|&&m| c.hom(m, u).is_empty()) {
        Some(&m) => PropertyReport::fails(
            "Universal",
            Witness::new("empty_hom").with("object", c.obj_id(m)),
        ),
        None => {
            let maps: serde_json::Map<String, serde_json::Value> = c0
                .iter()
                .map(|&m| (c.obj_id(m).to_string(), json!(c.mor_id(c.hom(m, u)[0]))))
                .collect();
            PropertyReport::holds(
                "Universal",
                Some(Witness::new("maps_into_target").with("maps", maps)),
            )
        }
    };
    let aut: Vec<Mor> = c
        .hom(u, u)
        .iter()
        .copied()
        .filter(|&a| c.inverse(a).is_some())
        .collect();
    let mut homogeneous = PropertyReport::holds(
        "StronglyHomogeneous",
        Some(Witness::new("single_orbits").with("automorphisms", aut.len())),
    );
    for &m in &c0 {
        let hom = c.hom(m, u);
        let Some(&f0) = hom.first() else { continue };
        let mut orbit: Vec<Mor> = aut.iter().map(|&a| c.compose_unchecked(a, f0)).collect();
        orbit.sort();
        orbit.dedup();
        if let Some(&g) = hom.iter().find(|g| orbit.binary_search(g).is_err()) {
            let w = Witness::new("no_connecting_automorphism")
                .with("object", c.obj_id(m))
                .with("left", c.mor_id(f0))
                .with("right", c.mor_id(g));
            homogeneous = PropertyReport::fails("StronglyHomogeneous", w);
            break;
        }
    }
    (universal, homogeneous)
}
