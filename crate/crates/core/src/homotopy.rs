//! Homotopy-equivalence certificates: Quillen's Theorem A through slices or
//! fibers, and natural transformations connecting composites to identities.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::budget::{Budget, ResourceLimit};
use crate::category::{FiniteCategory, Obj};
use crate::derive::{fiber, slice};
use crate::fibration::{check_functor_property, functor_error_witness, FunctorProperty};
use crate::functor::{Functor, FunctorError, NaturalTransformation};
use crate::homology::HomologyResult;
use crate::nerve::nerve_homology;
use crate::pi1::pi1_presentation;
use crate::properties::{holds, CategoryProperty};
use crate::report::{PropertyReport, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuillenSide {
    /// `F ↓ D` for every `D`.
    Slice,
    /// `F⁻¹(D)` for every `D`; needs an opfibration or a fibration.
    Fiber,
}

impl fmt::Display for QuillenSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Slice => "slice",
            Self::Fiber => "fiber",
        })
    }
}

impl FromStr for QuillenSide {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "slice" => Ok(Self::Slice),
            "fiber" | "fibre" => Ok(Self::Fiber),
            _ => Err(format!("unknown side `{s}` (expected slice or fiber)")),
        }
    }
}

/// How a single category was shown contractible, if it was.
#[derive(Clone, Debug, PartialEq)]
pub enum Contractibility {
    Certified(CategoryProperty),
    Empty,
    Nonvanishing {
        degree: usize,
        homology: HomologyResult,
    },
    Undecided,
}

/// Initial object, then terminal object, then filteredness; otherwise
/// homology up to `d` is used to refute.
pub fn contractibility(
    c: &FiniteCategory,
    d: usize,
    budget: &Budget,
) -> Result<Contractibility, ResourceLimit> {
    if c.is_empty() {
        return Ok(Contractibility::Empty);
    }
    for prop in [
        CategoryProperty::Initial,
        CategoryProperty::Terminal,
        CategoryProperty::Filtered,
    ] {
        if holds(c, prop, budget) == Verdict::Holds {
            return Ok(Contractibility::Certified(prop));
        }
    }
    let h = nerve_homology(c, d, budget)?;
    Ok(match h.first_reduced_nonzero() {
        Some(degree) => Contractibility::Nonvanishing {
            degree,
            homology: h,
        },
        None => Contractibility::Undecided,
    })
}

fn homology_value(h: &Result<HomologyResult, ResourceLimit>) -> Value {
    match h {
        Ok(h) => json!(h.to_string()),
        Err(e) => json!(format!("unknown: {e}")),
    }
}

/// Compares nerve homology of two categories up to `d`.
fn homology_agreement(
    a: &FiniteCategory,
    b: &FiniteCategory,
    d: usize,
    budget: &Budget,
) -> Witness {
    let (ha, hb) = (nerve_homology(a, d, budget), nerve_homology(b, d, budget));
    let agree = match (&ha, &hb) {
        (Ok(x), Ok(y)) => json!(x.groups == y.groups),
        _ => Value::Null,
    };
    Witness::new("homology_agreement")
        .with("dom", homology_value(&ha))
        .with("cod", homology_value(&hb))
        .with("agree", agree)
        .with("max_dim", d)
}

pub fn quillen_a_certify(
    f: &Functor,
    side: QuillenSide,
    d: usize,
    budget: &Budget,
) -> PropertyReport {
    let name = format!("QuillenA({side})");
    if let Some(e) = f.find_violation() {
        return PropertyReport::fails(name, functor_error_witness(&e));
    }
    let mut notes = Vec::new();
    if side == QuillenSide::Fiber {
        let op = check_functor_property(f, FunctorProperty::Opfibration, budget);
        if !op.is_holds() {
            let fib = check_functor_property(f, FunctorProperty::Fibration, budget);
            if !fib.is_holds() {
                let mut r = PropertyReport::unknown(name, op.witness.clone());
                r.notes.push(
                    "functor is neither an opfibration nor a fibration; fibers do not decide"
                        .into(),
                );
                return r;
            }
            notes.push("fibration (dual form)".to_string());
        } else {
            notes.push("opfibration".to_string());
        }
    }
    let cod = f.cod();
    let mut certs = serde_json::Map::new();
    let mut undecided = Vec::new();
    for t in cod.object_indices() {
        let piece = match side {
            QuillenSide::Slice => slice(f, t),
            QuillenSide::Fiber => fiber(f, t),
        };
        let object = cod.obj_id(t).to_string();
        match contractibility(&piece, d, budget) {
            Ok(Contractibility::Certified(p)) => {
                certs.insert(object, json!(p.name()));
            }
            Ok(Contractibility::Empty) => {
                let w = Witness::new(format!("empty_{side}"))
                    .with("object", object)
                    .with("reason", "empty category");
                return PropertyReport::fails(name, w);
            }
            Ok(Contractibility::Nonvanishing { degree, homology }) => {
                let w = Witness::new(format!("noncontractible_{side}"))
                    .with("object", object)
                    .with("reason", "nonvanishing reduced homology")
                    .with("degree", degree)
                    .with("homology", homology.to_string());
                return PropertyReport::fails(name, w);
            }
            Ok(Contractibility::Undecided) => undecided.push(object),
            Err(e) => return PropertyReport::resource_limit(name, &e),
        }
    }
    let mut r = if undecided.is_empty() {
        let cert = Witness::new("contractible_pieces")
            .with("criteria", certs)
            .with(
                "homology",
                json!(homology_agreement(f.dom(), cod, d, budget).fields),
            );
        PropertyReport::holds(name, Some(cert))
    } else {
        PropertyReport::unknown(
            name,
            Some(Witness::new("uncertified_pieces").with("objects", undecided)),
        )
    };
    r.notes = notes;
    r
}

/// Union-find over the functors mentioned by the evidence.
struct FunctorClasses {
    nodes: Vec<Functor>,
    parent: Vec<usize>,
}

impl FunctorClasses {
    fn node(&mut self, f: &Functor) -> usize {
        match self.nodes.iter().position(|g| g == f) {
            Some(i) => i,
            None => {
                self.nodes.push(f.clone());
                self.parent.push(self.parent.len());
                self.parent.len() - 1
            }
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra.max(rb)] = ra.min(rb);
    }
}

/// `F: C → D` and `G: D → C` with transformations (in either direction)
/// linking `id_C` to `GF` and `id_D` to `FG`, possibly through other
/// functors. A failing naturality square yields a Fails report.
pub fn homotopy_equivalence_certify(
    f: &Functor,
    g: &Functor,
    evidence: &[NaturalTransformation],
    d: usize,
    max_cosets: usize,
    budget: &Budget,
) -> Result<PropertyReport, FunctorError> {
    const NAME: &str = "HomotopyEquivalence";
    if **f.cod() != **g.dom() || **g.cod() != **f.dom() {
        return Err(FunctorError::ShapeMismatch(
            "G must go back from the codomain of F to its domain".into(),
        ));
    }
    for h in [f, g] {
        if let Some(e) = h.find_violation() {
            return Ok(PropertyReport::fails(NAME, functor_error_witness(&e)));
        }
    }
    let (c, dd) = (f.dom().clone(), f.cod().clone());
    let gf = f.then(g)?;
    let fg = g.then(f)?;
    let mut classes = FunctorClasses {
        nodes: Vec::new(),
        parent: Vec::new(),
    };
    let id_c = classes.node(&Functor::identity(c.clone()));
    let gf_i = classes.node(&gf);
    let id_d = classes.node(&Functor::identity(dd.clone()));
    let fg_i = classes.node(&fg);
    for (i, t) in evidence.iter().enumerate() {
        let on_c = **t.source().dom() == *c && **t.source().cod() == *c;
        let on_d = **t.source().dom() == *dd && **t.source().cod() == *dd;
        if !on_c && !on_d {
            return Err(FunctorError::ShapeMismatch(format!(
                "evidence {i} is not between endofunctors of either category"
            )));
        }
        let (a, b) = (classes.node(t.source()), classes.node(t.target()));
        classes.union(a, b);
    }
    if classes.find(id_c) != classes.find(gf_i) {
        return Err(FunctorError::ShapeMismatch(
            "evidence does not connect id to G∘F".into(),
        ));
    }
    if classes.find(id_d) != classes.find(fg_i) {
        return Err(FunctorError::ShapeMismatch(
            "evidence does not connect id to F∘G".into(),
        ));
    }
    for (i, t) in evidence.iter().enumerate() {
        if let Some(sq) = t.broken_square() {
            let (dom, cod) = (t.source().dom(), t.source().cod());
            let w = Witness::new("naturality_failure")
                .with("transformation", i)
                .with("morphism", dom.mor_id(sq.morphism))
                .with("left", cod.mor_id(sq.left))
                .with("right", cod.mor_id(sq.right));
            return Ok(PropertyReport::fails(NAME, w));
        }
    }
    let mut cert = homology_agreement(&c, &dd, d, budget).with("transformations", evidence.len());
    cert.kind = "homotopy_equivalence".into();
    let orders = pi1_orders(&c, f, &dd, max_cosets, budget);
    let r = PropertyReport::holds(NAME, Some(cert.with("pi1_orders", orders)));
    Ok(r)
}

/// π₁ orders at the first object of each component of `C` and at its image.
fn pi1_orders(
    c: &Arc<FiniteCategory>,
    f: &Functor,
    d: &Arc<FiniteCategory>,
    max_cosets: usize,
    budget: &Budget,
) -> Value {
    let order_at = |cat: &Arc<FiniteCategory>, x: Obj| -> Value {
        let p = pi1_presentation(cat, x);
        match p.identify(max_cosets, budget) {
            Ok(g) => g.order().map(|n| json!(n)).unwrap_or(Value::Null),
            Err(_) => Value::Null,
        }
    };
    let mut out = Vec::new();
    for comp in c.components() {
        let x = comp[0];
        let (a, b) = (order_at(c, x), order_at(d, f.on_obj(x)));
        let agree = if a.is_null() || b.is_null() {
            Value::Null
        } else {
            json!(a == b)
        };
        out.push(json!({"basepoint": c.obj_id(x), "dom": a, "cod": b, "agree": agree}));
    }
    Value::Array(out)
}
