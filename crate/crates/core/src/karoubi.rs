//! Idempotent splitting.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{identity_name, validate_category, FiniteCategory, Mor, Obj, RawCategory};
use crate::functor::Functor;

/// Idempotent endomorphisms of each object, identities included.
pub fn idempotents(c: &FiniteCategory) -> Vec<(Obj, Mor)> {
    c.object_indices()
        .flat_map(|x| {
            c.hom(x, x)
                .iter()
                .filter(|&&e| c.compose_unchecked(e, e) == e)
                .map(move |&e| (x, e))
        })
        .collect()
}

fn split_name(c: &FiniteCategory, x: Obj, e: Mor) -> String {
    if c.is_identity(e) {
        c.obj_id(x).to_string()
    } else {
        format!("({},{})", c.obj_id(x), c.mor_id(e))
    }
}

/// Objects `(X, e)` for idempotents `e`, morphisms `(X,e) → (Y,e')` the
/// `m` with `e' m e = m`. Objects `(X, 1)` keep the name `X` and morphisms
/// between them keep their names, so the inclusion is name-preserving.
pub fn karoubi_envelope(c: &Arc<FiniteCategory>) -> (Arc<FiniteCategory>, Functor) {
    let objs = idempotents(c);
    let names: Vec<String> = objs.iter().map(|&(x, e)| split_name(c, x, e)).collect();
    let mut raw = RawCategory {
        objects: names.clone(),
        ..Default::default()
    };
    let mut arrows: Vec<(usize, usize, Mor, String)> = Vec::new();
    for (i, &(x, e)) in objs.iter().enumerate() {
        for (j, &(y, e2)) in objs.iter().enumerate() {
            for &m in c.hom(x, y) {
                if c.compose_unchecked(c.compose_unchecked(e2, m), e) != m {
                    continue;
                }
                let name = if i == j && m == e {
                    if c.is_identity(e) {
                        c.mor_id(m).to_string()
                    } else {
                        identity_name(&names[i])
                    }
                } else if c.is_identity(e) && c.is_identity(e2) {
                    c.mor_id(m).to_string()
                } else {
                    format!("[{}:{}>{}]", c.mor_id(m), names[i], names[j])
                };
                raw.morphism(&name, &names[i], &names[j]);
                if i == j && m == e {
                    raw.identities.push((names[i].clone(), name.clone()));
                }
                arrows.push((i, j, m, name));
            }
        }
    }
    let lookup: HashMap<(usize, usize, Mor), usize> = arrows
        .iter()
        .enumerate()
        .map(|(k, (i, j, m, _))| ((*i, *j, *m), k))
        .collect();
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); objs.len()];
    for (k, a) in arrows.iter().enumerate() {
        by_source[a.0].push(k);
    }
    for (i, j, m, name) in &arrows {
        for &k in &by_source[*j] {
            let (_, l, n, name2) = &arrows[k];
            let nm = c.compose_unchecked(*n, *m);
            raw.composite(name2, name, &arrows[lookup[&(*i, *l, nm)]].3);
        }
    }
    let k = Arc::new(
        validate_category(&raw).expect("idempotent splitting of a valid category is valid"),
    );
    let on_objects: Vec<Obj> = c
        .object_indices()
        .map(|x| k.obj(c.obj_id(x)).unwrap())
        .collect();
    let on_morphisms: Vec<Mor> = c
        .morphism_indices()
        .map(|m| k.mor(c.mor_id(m)).unwrap())
        .collect();
    let inc = Functor::new(c.clone(), k.clone(), on_objects, on_morphisms)
        .expect("inclusion is a functor");
    (k, inc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::nerve::nerve_homology;
    use crate::zoo;

    #[test]
    fn groups_and_posets_are_already_split() {
        for c in [
            zoo::symmetric_group(3),
            zoo::circle_poset(),
            zoo::walking_span(),
        ] {
            let c = Arc::new(c);
            let (k, inc) = karoubi_envelope(&c);
            assert_eq!(*k, *c);
            assert!(inc.object_map().iter().enumerate().all(|(i, o)| o.0 == i));
        }
    }

    #[test]
    fn walking_idempotent_gains_a_splitting() {
        let c = Arc::new(zoo::walking_idempotent());
        let (k, _) = karoubi_envelope(&c);
        assert_eq!(k.objects(), &["(o,e)".to_string(), "o".to_string()]);
        // hom((o,e),(o,e)) = {e}, hom((o,e), o) = {e}, hom(o, (o,e)) = {e}, hom(o, o) = {1, e}.
        assert_eq!(k.num_morphisms(), 5);
        let so = k.obj("(o,e)").unwrap();
        assert_eq!(k.mor_id(k.identity(so)), "1_(o,e)");
        let b = Budget::unlimited();
        assert!(nerve_homology(&c, 2, &b).unwrap().is_acyclic());
        assert!(nerve_homology(&k, 2, &b).unwrap().is_acyclic());
    }
}
