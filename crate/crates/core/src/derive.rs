//! Opposite, product, slice and fiber categories.

use std::sync::Arc;

use thiserror::Error;

use crate::category::{
    identity_name, validate_category, CategoryError, FiniteCategory, Mor, Obj, RawCategory,
};
use crate::functor::{Functor, FunctorError};

#[derive(Clone, Debug)]
pub enum DeriveSpec {
    Opposite,
    Product(Arc<FiniteCategory>),
    /// `F ↓ D` for `F: C → D` and an object of `D`.
    Slice(Functor, Obj),
    /// `F⁻¹(D)`: objects over `D`, morphisms over its identity.
    Fiber(Functor, Obj),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("invalid functor: {0}")]
    InvalidFunctor(FunctorError),
    #[error("functor domain is not the given category")]
    DomainMismatch,
    #[error(transparent)]
    Category(#[from] CategoryError),
}

pub fn derive_category(
    c: &FiniteCategory,
    spec: &DeriveSpec,
) -> Result<FiniteCategory, DeriveError> {
    match spec {
        DeriveSpec::Opposite => Ok(opposite(c)),
        DeriveSpec::Product(d) => Ok(product(c, d)),
        DeriveSpec::Slice(f, d) | DeriveSpec::Fiber(f, d) => {
            if **f.dom() != *c {
                return Err(DeriveError::DomainMismatch);
            }
            if let Some(e) = f.find_violation() {
                return Err(DeriveError::InvalidFunctor(e));
            }
            Ok(if matches!(spec, DeriveSpec::Slice(..)) {
                slice(f, *d)
            } else {
                fiber(f, *d)
            })
        }
    }
}

/// Same ids, endpoints swapped, `g ∘op f = f ∘ g`.
pub fn opposite(c: &FiniteCategory) -> FiniteCategory {
    let mut raw = RawCategory {
        objects: c.objects().to_vec(),
        ..Default::default()
    };
    raw.identities = c
        .object_indices()
        .map(|o| (c.obj_id(o).to_string(), c.mor_id(c.identity(o)).to_string()))
        .collect();
    for m in c.morphisms() {
        raw.morphism(&m.id, c.obj_id(m.tgt), c.obj_id(m.src));
    }
    for f in c.morphism_indices() {
        for &g in c.out_of(c.tgt(f)) {
            raw.composite(
                c.mor_id(f),
                c.mor_id(g),
                c.mor_id(c.compose_unchecked(g, f)),
            );
        }
    }
    validate_category(&raw).expect("opposite of a valid category is valid")
}

pub fn pair_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

pub fn product(c: &FiniteCategory, d: &FiniteCategory) -> FiniteCategory {
    let mor_name = |f: Mor, g: Mor| {
        if c.is_identity(f) && d.is_identity(g) {
            identity_name(&pair_name(c.obj_id(c.src(f)), d.obj_id(d.src(g))))
        } else {
            pair_name(c.mor_id(f), d.mor_id(g))
        }
    };
    let mut raw = RawCategory::default();
    for x in c.object_indices() {
        for y in d.object_indices() {
            raw.object(pair_name(c.obj_id(x), d.obj_id(y)));
        }
    }
    for f in c.morphism_indices() {
        for g in d.morphism_indices() {
            raw.morphism(
                mor_name(f, g),
                pair_name(c.obj_id(c.src(f)), d.obj_id(d.src(g))),
                pair_name(c.obj_id(c.tgt(f)), d.obj_id(d.tgt(g))),
            );
        }
    }
    for f1 in c.morphism_indices() {
        for &f2 in c.out_of(c.tgt(f1)) {
            let f21 = c.compose_unchecked(f2, f1);
            for g1 in d.morphism_indices() {
                for &g2 in d.out_of(d.tgt(g1)) {
                    let g21 = d.compose_unchecked(g2, g1);
                    raw.composite(mor_name(f2, g2), mor_name(f1, g1), mor_name(f21, g21));
                }
            }
        }
    }
    validate_category(&raw).expect("product of valid categories is valid")
}

/// The product together with its two projection functors.
pub fn product_with_projections(
    c: &Arc<FiniteCategory>,
    d: &Arc<FiniteCategory>,
) -> (Arc<FiniteCategory>, Functor, Functor) {
    let p = Arc::new(product(c, d));
    let n = d.num_objects();
    let mut objs1 = vec![Obj(0); p.num_objects()];
    let mut objs2 = objs1.clone();
    for x in c.object_indices() {
        for y in d.object_indices() {
            let o = p.obj(&pair_name(c.obj_id(x), d.obj_id(y))).unwrap();
            objs1[o.0] = x;
            objs2[o.0] = y;
        }
    }
    debug_assert_eq!(p.num_objects(), c.num_objects() * n);
    let mut mors1 = vec![Mor(0); p.num_morphisms()];
    let mut mors2 = mors1.clone();
    for f in c.morphism_indices() {
        for g in d.morphism_indices() {
            let id = if c.is_identity(f) && d.is_identity(g) {
                identity_name(&pair_name(c.obj_id(c.src(f)), d.obj_id(d.src(g))))
            } else {
                pair_name(c.mor_id(f), d.mor_id(g))
            };
            let m = p.mor(&id).unwrap();
            mors1[m.0] = f;
            mors2[m.0] = g;
        }
    }
    let p1 = Functor::unchecked(p.clone(), c.clone(), objs1, mors1);
    let p2 = Functor::unchecked(p.clone(), d.clone(), objs2, mors2);
    (p, p1, p2)
}

fn slice_object_name(c: &FiniteCategory, d: &FiniteCategory, x: Obj, u: Mor) -> String {
    pair_name(c.obj_id(x), d.mor_id(u))
}

/// `F ↓ D`: objects `(X, u: F X → D)`, morphisms `g: X → X'` with `u' ∘ F g = u`.
pub fn slice(f: &Functor, target: Obj) -> FiniteCategory {
    let (c, d) = (&**f.dom(), &**f.cod());
    let objects: Vec<(Obj, Mor)> = c
        .object_indices()
        .flat_map(|x| d.hom(f.on_obj(x), target).iter().map(move |&u| (x, u)))
        .collect();
    let names: Vec<String> = objects
        .iter()
        .map(|&(x, u)| slice_object_name(c, d, x, u))
        .collect();
    let mut raw = RawCategory {
        objects: names.clone(),
        ..Default::default()
    };
    // Morphisms indexed by (source object, target object, g).
    let mut morphs: Vec<(usize, usize, Mor, String)> = Vec::new();
    for (i, &(x, u)) in objects.iter().enumerate() {
        for (j, &(y, v)) in objects.iter().enumerate() {
            for &g in c.hom(x, y) {
                if d.compose_unchecked(v, f.on_mor(g)) != u {
                    continue;
                }
                let name = if i == j && c.is_identity(g) {
                    identity_name(&names[i])
                } else {
                    format!("[{}:{}>{}]", c.mor_id(g), names[i], names[j])
                };
                raw.morphism(&name, &names[i], &names[j]);
                morphs.push((i, j, g, name));
            }
        }
    }
    let lookup: std::collections::HashMap<(usize, usize, Mor), &str> = morphs
        .iter()
        .map(|(i, j, g, n)| ((*i, *j, *g), n.as_str()))
        .collect();
    for (i, j, g, name) in &morphs {
        for (j2, k, h, name2) in &morphs {
            if j2 != j {
                continue;
            }
            let hg = c.compose_unchecked(*h, *g);
            raw.composite(name2, name, lookup[&(*i, *k, hg)]);
        }
    }
    validate_category(&raw).expect("slice of a valid functor is valid")
}

pub fn fiber(f: &Functor, target: Obj) -> FiniteCategory {
    let (c, d) = (&**f.dom(), &**f.cod());
    let objs: Vec<Obj> = c
        .object_indices()
        .filter(|&x| f.on_obj(x) == target)
        .collect();
    let keep: Vec<Mor> = c
        .morphism_indices()
        .filter(|&m| f.on_mor(m) == d.identity(target) && f.on_obj(c.src(m)) == target)
        .collect();
    let mut raw = RawCategory::default();
    for &x in &objs {
        raw.object(c.obj_id(x));
        raw.identities
            .push((c.obj_id(x).to_string(), c.mor_id(c.identity(x)).to_string()));
    }
    for &m in &keep {
        raw.morphism(c.mor_id(m), c.obj_id(c.src(m)), c.obj_id(c.tgt(m)));
    }
    for &m in &keep {
        for &n in &keep {
            if c.src(n) == c.tgt(m) {
                raw.composite(
                    c.mor_id(n),
                    c.mor_id(m),
                    c.mor_id(c.compose_unchecked(n, m)),
                );
            }
        }
    }
    validate_category(&raw).expect("fiber of a valid functor is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn opposite_of_walking_arrow_swaps_endpoints() {
        let c = zoo::walking_arrow();
        let op = opposite(&c);
        let f = op.mor("f").unwrap();
        assert_eq!(op.obj_id(op.src(f)), "b");
        assert_eq!(op.obj_id(op.tgt(f)), "a");
    }

    #[test]
    fn opposite_is_an_involution() {
        for c in [
            zoo::symmetric_group(3),
            zoo::walking_span(),
            zoo::circle_poset(),
            zoo::walking_idempotent(),
        ] {
            assert_eq!(opposite(&opposite(&c)), c);
        }
    }

    #[test]
    fn product_of_bs2_with_itself_is_klein_four() {
        let c = zoo::cyclic_group(2);
        let p = product(&c, &c);
        assert_eq!(p.num_objects(), 1);
        assert_eq!(p.num_morphisms(), 4);
        // Brute-force oracle: every element squares to the identity and the
        // table is the componentwise table of Z/2 × Z/2.
        let id = p.identity(Obj(0));
        for m in p.morphism_indices() {
            assert_eq!(p.compose(m, m), Some(id));
        }
        let a = p.mor("(g1,1_o)").unwrap();
        let b = p.mor("(1_o,g1)").unwrap();
        assert_eq!(p.compose(a, b), p.mor("(g1,g1)"));
        assert_eq!(p.compose(b, a), p.mor("(g1,g1)"));
    }

    #[test]
    fn slice_of_poset_over_top_is_down_set() {
        let p = Arc::new(zoo::chain(2));
        let id = Functor::identity(p.clone());
        let s = derive_category(&p, &DeriveSpec::Slice(id, p.obj("1").unwrap())).unwrap();
        assert_eq!(s.num_objects(), 2);
        assert_eq!(s.non_identities().count(), 1);
    }

    #[test]
    fn fiber_of_projection() {
        let c = Arc::new(zoo::walking_arrow());
        let d = Arc::new(zoo::cyclic_group(2));
        let (_, p1, _) = product_with_projections(&c, &d);
        let fib = fiber(&p1, c.obj("a").unwrap());
        // Fiber over a is a copy of B Z/2.
        assert_eq!(fib.num_objects(), 1);
        assert_eq!(fib.num_morphisms(), 2);
    }

    #[test]
    fn slice_rejects_invalid_functor() {
        let c = Arc::new(zoo::cyclic_group(2));
        let t = c.mor("g1").unwrap();
        let bad = Functor::unchecked(c.clone(), c.clone(), vec![Obj(0)], vec![t, t]);
        assert!(matches!(
            derive_category(&c, &DeriveSpec::Slice(bad, Obj(0))),
            Err(DeriveError::InvalidFunctor(_))
        ));
    }
}
