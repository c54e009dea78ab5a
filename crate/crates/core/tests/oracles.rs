//! Values computed here by hand-built means, compared with the library.

use std::sync::Arc;

use lascat_core::complex::{simplicial_homology, SimplicialComplex};
use lascat_core::lascar::{automorphism_group, lascar_group};
use lascat_core::nerve::{nerve_homology, nerve_truncated};
use lascat_core::pi1::pi1_presentation;
use lascat_core::{zoo, Budget, HomologyGroup};

fn budget() -> Budget {
    Budget::unlimited()
}

fn falling(m: usize, k: usize) -> usize {
    (m - k + 1..=m).product()
}

/// Normalized bar complex of Z/n: one generator per degree, with
/// `∂ₖ = 0` for odd `k` and `∂ₖ = n` for even `k > 0` over the trivial module.
fn cyclic_group_homology(n: u64, d: usize) -> Vec<HomologyGroup> {
    (0..=d)
        .map(|k| match k {
            0 => HomologyGroup::free(1),
            k if k % 2 == 1 => HomologyGroup::with_torsion(0, &[n]),
            _ => HomologyGroup::free(0),
        })
        .collect()
}

#[test]
fn bz2_matches_the_bar_resolution() {
    let h = nerve_homology(&zoo::cyclic_group(2), 5, &budget()).unwrap();
    assert_eq!(h.groups, cyclic_group_homology(2, 5));
}

#[test]
fn bz3_matches_the_bar_resolution() {
    let h = nerve_homology(&zoo::cyclic_group(3), 3, &budget()).unwrap();
    assert_eq!(h.groups, cyclic_group_homology(3, 3));
}

#[test]
fn group_nerves_count_tuples_of_non_identities() {
    // Nondegenerate n-simplices of BG are n-tuples of non-identity elements.
    for (c, g) in [
        (zoo::cyclic_group(2), 2usize),
        (zoo::cyclic_group(5), 5),
        (zoo::symmetric_group(3), 6),
    ] {
        let counts = nerve_truncated(&c, 3, &budget()).unwrap().counts();
        let expected: Vec<usize> = (0..=3).map(|n| (g - 1).pow(n as u32)).collect();
        assert_eq!(counts, expected);
    }
}

#[test]
fn injection_hom_sets_have_falling_factorial_size() {
    let c = zoo::injections(4);
    for k in 0..=4 {
        for m in 0..=4 {
            let a = c.obj(&format!("U{k}")).unwrap();
            let b = c.obj(&format!("U{m}")).unwrap();
            let expected = if k <= m { falling(m, k) } else { 0 };
            assert_eq!(c.hom(a, b).len(), expected, "U{k} → U{m}");
        }
        assert_eq!(
            automorphism_group(&c, c.obj(&format!("U{k}")).unwrap())
                .table
                .order(),
            falling(k, k)
        );
    }
    let total: usize = (0..=4)
        .flat_map(|k| (k..=4).map(move |m| falling(m, k)))
        .sum();
    assert_eq!(c.num_morphisms(), total);
}

#[test]
fn boolean_lattice_has_three_to_the_k_relations() {
    // Each atom is in neither, only the upper, or both sets of a pair a ≤ b.
    for k in 0..=4 {
        assert_eq!(
            zoo::boolean_lattice(k).num_morphisms(),
            3usize.pow(k as u32)
        );
    }
}

#[test]
fn injections_have_trivial_lascar_quotient() {
    let c = zoo::injections(4);
    let small: Vec<_> = (0..=2).map(|k| c.obj(&format!("U{k}")).unwrap()).collect();
    let u = c.obj("U4").unwrap();
    let r = lascar_group(&c, &small, u, false).unwrap();
    assert_eq!(r.lst_order(), 24);
    assert_eq!(r.gal().unwrap().order(), 1);
    // An automorphism of U₄ fixing a map from U₃ fixes all four points.
    let three = lascar_group(&c, &[c.obj("U3").unwrap()], u, false).unwrap();
    assert_eq!(three.lst_order(), 1);
    assert_eq!(three.gal().unwrap().order(), 24);
}

#[test]
fn symmetric_group_pi1_order() {
    for (n, order) in [(2, 2), (3, 6), (4, 24)] {
        let c = Arc::new(zoo::symmetric_group(n));
        let g = pi1_presentation(&c, c.obj("o").unwrap())
            .identify(1000, &budget())
            .unwrap();
        assert_eq!(g.order(), Some(order));
    }
}

#[test]
fn spheres_from_simplex_boundaries() {
    for n in 1..=3 {
        let k = SimplicialComplex::simplex_boundary(n);
        let h = simplicial_homology(&k, n, &budget()).unwrap();
        let reduced_top = h.degree(n - 1).betti - usize::from(n == 1);
        assert_eq!(reduced_top, 1, "∂Δ^{n}: {h}");
        assert!((1..n - 1).all(|i| h.degree(i).is_zero()), "∂Δ^{n}: {h}");
        assert!(h.degree(n).is_zero());
    }
}
