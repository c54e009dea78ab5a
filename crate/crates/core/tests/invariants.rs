use std::sync::Arc;

use lascat_core::complex::{
    barycentric_subdivide, face_poset, simplicial_homology, SimplicialComplex,
};
use lascat_core::derive::{opposite, product};
use lascat_core::group::{coset_enumeration, tietze_simplify, GroupPresentation, Letter};
use lascat_core::lascar::lascar_group;
use lascat_core::nerve::{nerve_homology, nerve_truncated};
use lascat_core::pi1::pi1_presentation;
use lascat_core::poset::Poset;
use lascat_core::{zoo, Budget, FiniteCategory, HomologyResult, Obj};
use num_bigint::BigInt;
use proptest::prelude::*;

fn budget() -> Budget {
    Budget::unlimited()
}

/// Posets on up to six elements; a relation `i ≤ j` is only drawn for `i < j`.
fn poset() -> impl Strategy<Value = FiniteCategory> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        pairs.push((names[i].clone(), names[j].clone()));
                    }
                    k += 1;
                }
            }
            Poset::from_relations(&names, &pairs).unwrap().to_category()
        })
    })
}

/// Small categories with nontrivial endomorphisms mixed in.
fn category() -> impl Strategy<Value = FiniteCategory> {
    prop_oneof![
        poset(),
        (1usize..=5).prop_map(zoo::cyclic_group),
        (2usize..=3).prop_map(zoo::symmetric_group),
        Just(zoo::walking_idempotent()),
        Just(zoo::walking_span()),
        (1usize..=3).prop_map(zoo::injections),
        (1usize..=3, poset()).prop_map(|(n, p)| product(&zoo::cyclic_group(n), &p)),
    ]
}

fn complex() -> impl Strategy<Value = SimplicialComplex> {
    proptest::collection::vec(proptest::collection::btree_set(0u8..6, 1..=3), 1..=5).prop_map(
        |facets| {
            let facets: Vec<Vec<String>> = facets
                .into_iter()
                .map(|f| f.into_iter().map(|v| format!("v{v}")).collect())
                .collect();
            SimplicialComplex::new(&facets).unwrap()
        },
    )
}

fn elementary(torsion: &[BigInt]) -> Vec<u64> {
    let mut out = Vec::new();
    for t in torsion {
        let mut n = u64::try_from(t).unwrap();
        let mut p = 2;
        while n > 1 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            if q > 1 {
                out.push(q);
            }
            p += 1;
        }
    }
    out.sort_unstable();
    out
}

fn same_homology(a: &HomologyResult, b: &HomologyResult) -> bool {
    a.groups.len() == b.groups.len()
        && a.groups
            .iter()
            .zip(&b.groups)
            .all(|(x, y)| x.betti == y.betti && elementary(&x.torsion) == elementary(&y.torsion))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn opposite_is_an_involution(c in category()) {
        prop_assert_eq!(opposite(&opposite(&c)), c);
    }

    #[test]
    fn homology_ignores_names(c in category()) {
        let r = c.renamed(|o| format!("obj:{o}"), |m| format!("mor:{m}")).unwrap();
        prop_assert_eq!(nerve_homology(&c, 2, &budget()).unwrap(), nerve_homology(&r, 2, &budget()).unwrap());
    }

    #[test]
    fn boundary_squares_to_zero(c in category()) {
        let n = nerve_truncated(&c, 3, &budget()).unwrap();
        prop_assert!(n.simplicial_identities_hold());
        prop_assert!(n.chain_complex().boundary_squares_to_zero());
    }

    #[test]
    fn streaming_reduction_matches_chain_complex(c in category()) {
        let n = nerve_truncated(&c, 3, &budget()).unwrap();
        prop_assert_eq!(n.homology(2, &budget()).unwrap(), n.chain_complex().homology(2, &budget()).unwrap());
    }

    #[test]
    fn h0_counts_components(c in category()) {
        let h = nerve_homology(&c, 0, &budget()).unwrap();
        prop_assert_eq!(h.degree(0).betti, c.components().len());
        prop_assert!(h.degree(0).torsion.is_empty());
    }

    #[test]
    fn opposite_has_the_same_homology(c in category()) {
        prop_assert_eq!(nerve_homology(&c, 2, &budget()).unwrap(), nerve_homology(&opposite(&c), 2, &budget()).unwrap());
    }

    #[test]
    fn hurewicz_in_degree_one(c in category()) {
        let h = nerve_homology(&c, 1, &budget()).unwrap();
        let (mut rank, mut torsion) = (0, Vec::new());
        for comp in c.components() {
            let p = pi1_presentation(&Arc::new(c.clone()), comp[0]);
            let ab = p.presentation.abelianization(&budget()).unwrap();
            rank += ab.rank;
            torsion.extend(ab.torsion);
        }
        prop_assert_eq!(h.degree(1).betti, rank);
        prop_assert_eq!(elementary(&h.degree(1).torsion), elementary(&torsion));
    }

    #[test]
    fn face_poset_matches_the_complex(k in complex()) {
        let (_, c) = face_poset(&k);
        let a = simplicial_homology(&k, 2, &budget()).unwrap();
        let b = nerve_homology(&c, 2, &budget()).unwrap();
        prop_assert!(same_homology(&a, &b), "{} vs {}", a, b);
    }

    #[test]
    fn subdivision_keeps_homology(k in complex()) {
        let a = simplicial_homology(&k, 2, &budget()).unwrap();
        let b = simplicial_homology(&barycentric_subdivide(&k), 2, &budget()).unwrap();
        prop_assert!(same_homology(&a, &b), "{} vs {}", a, b);
    }

    #[test]
    fn product_of_cyclic_groups(n in 1usize..=5, m in 1usize..=5) {
        let c = Arc::new(product(&zoo::cyclic_group(n), &zoo::cyclic_group(m)));
        let g = pi1_presentation(&c, Obj(0)).identify(1000, &budget()).unwrap();
        prop_assert_eq!(g.order(), Some(n * m));
    }

    #[test]
    fn tietze_keeps_the_group(a in 1usize..=6, b in 1usize..=6, extra in proptest::collection::vec(0usize..4, 0..6)) {
        // ⟨x, y | xᵃ, yᵇ, w⟩ for a random word w.
        let letters = [Letter::pos(0), Letter::neg(0), Letter::pos(1), Letter::neg(1)];
        let w: Vec<Letter> = extra.iter().map(|&i| letters[i]).collect();
        let mut relators = vec![vec![Letter::pos(0); a], vec![Letter::pos(1); b]];
        if !w.is_empty() {
            relators.push(w);
        }
        let p = GroupPresentation::new(vec!["x".into(), "y".into()], relators).unwrap();
        let t = tietze_simplify(&p, &budget());
        prop_assert_eq!(p.abelianization(&budget()).unwrap(), t.presentation.abelianization(&budget()).unwrap());
        let before = coset_enumeration(&p, 5000, &budget());
        let after = coset_enumeration(&t.presentation, 5000, &budget());
        if let (Ok(x), Ok(y)) = (before, after) {
            prop_assert_eq!(x.order(), y.order());
        }
    }

    #[test]
    fn lst_is_normal_and_gal_divides_aut(small in proptest::collection::btree_set(0usize..5, 0..=3), u in 2usize..=4) {
        let c = zoo::injections(4);
        let c0: Vec<Obj> = small.into_iter().map(|k| c.obj(&format!("U{k}")).unwrap()).collect();
        let u = c.obj(&format!("U{u}")).unwrap();
        let r = lascar_group(&c, &c0, u, false).unwrap();
        prop_assert!(r.normality_verified);
        prop_assert!(r.aut.table.is_subgroup(&r.lst));
        prop_assert_eq!(r.aut.table.normality_witness(&r.lst), None);
        let q = r.quotient.as_ref().unwrap();
        prop_assert!(q.table.order() <= r.aut.table.order());
        prop_assert_eq!(q.table.order() * r.lst.len(), r.aut.table.order());
    }
}
