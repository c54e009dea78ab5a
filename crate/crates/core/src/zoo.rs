//! Small named categories used throughout tests, examples and the corpus.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{identity_name, validate_category, FiniteCategory, Mor, RawCategory};
use crate::functor::Functor;
use crate::group::table::{permutations, FiniteGroupTable};
use crate::poset::Poset;

/// One-object category of a group. The identity is `1_o`; every other
/// element `x` becomes the morphism `<prefix><name of x>`.
pub fn group_category(g: &FiniteGroupTable, prefix: &str) -> FiniteCategory {
    let name = |i: usize| {
        if i == g.identity() {
            identity_name("o")
        } else {
            format!("{prefix}{}", g.name(i))
        }
    };
    let mut raw = RawCategory::default();
    raw.object("o");
    for i in 0..g.order() {
        if i != g.identity() {
            raw.morphism(name(i), "o", "o");
        }
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            if a != g.identity() && b != g.identity() {
                raw.composite(name(a), name(b), name(g.mul(a, b)));
            }
        }
    }
    validate_category(&raw).expect("group table gives a category")
}

/// B(Z/n): morphisms `g1 … g(n-1)` with `gₐ∘g_b = g_{a+b mod n}`.
pub fn cyclic_group(n: usize) -> FiniteCategory {
    group_category(&FiniteGroupTable::cyclic(n), "g")
}

/// B(Sₙ): permutations in one-line notation, e.g. `p102`.
pub fn symmetric_group(n: usize) -> FiniteCategory {
    group_category(&FiniteGroupTable::symmetric(n), "p")
}

/// `a → b`.
pub fn walking_arrow() -> FiniteCategory {
    let mut raw = RawCategory::default();
    raw.object("a").object("b").morphism("f", "a", "b");
    validate_category(&raw).unwrap()
}

/// `B ← A → C` with legs `f: A → B`, `g: A → C`.
pub fn walking_span() -> FiniteCategory {
    let mut raw = RawCategory::default();
    raw.object("A")
        .object("B")
        .object("C")
        .morphism("f", "A", "B")
        .morphism("g", "A", "C");
    validate_category(&raw).unwrap()
}

/// One object with a non-identity idempotent `e`.
pub fn walking_idempotent() -> FiniteCategory {
    let mut raw = RawCategory::default();
    raw.object("o")
        .morphism("e", "o", "o")
        .composite("e", "e", "e");
    validate_category(&raw).unwrap()
}

pub fn discrete(n: usize) -> FiniteCategory {
    let mut raw = RawCategory::default();
    for i in 0..n {
        raw.object(i.to_string());
    }
    validate_category(&raw).unwrap()
}

pub fn poset(elements: &[&str], leq: &[(&str, &str)]) -> Poset {
    let el: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
    let pairs: Vec<(String, String)> = leq
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    Poset::from_relations(&el, &pairs).expect("valid poset")
}

/// Total order `0 < 1 < … < n-1`.
pub fn chain(n: usize) -> FiniteCategory {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let pairs: Vec<(String, String)> = names
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    Poset::from_relations(&names, &pairs).unwrap().to_category()
}

/// `a, b < x, y`: the four-point model of the circle.
pub fn circle_poset() -> FiniteCategory {
    poset(
        &["a", "b", "x", "y"],
        &[("a", "x"), ("a", "y"), ("b", "x"), ("b", "y")],
    )
    .to_category()
}

/// Subsets of `{0, …, k-1}` under inclusion, named like `{0,2}`.
pub fn boolean_lattice_poset(k: usize) -> Poset {
    let name = |mask: usize| {
        let parts: Vec<String> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i.to_string())
            .collect();
        format!("{{{}}}", parts.join(","))
    };
    let elements: Vec<String> = (0..1usize << k).map(name).collect();
    let mut pairs = Vec::new();
    for a in 0..1usize << k {
        for i in 0..k {
            if a >> i & 1 == 0 {
                pairs.push((name(a), name(a | 1 << i)));
            }
        }
    }
    Poset::from_relations(&elements, &pairs).unwrap()
}

pub fn boolean_lattice(k: usize) -> FiniteCategory {
    boolean_lattice_poset(k).to_category()
}

/// Injections among `{0..k}` for `k ≤ max`: objects `U0 … U<max>`, a map
/// `Uk → Um` named `Uk>Um:` followed by its image digits.
pub fn injections(max: usize) -> FiniteCategory {
    assert!(max <= 9, "single-digit images only");
    let mut raw = RawCategory::default();
    let obj = |k: usize| format!("U{k}");
    let mut maps: BTreeMap<(usize, usize), Vec<Vec<usize>>> = BTreeMap::new();
    for k in 0..=max {
        raw.object(obj(k));
        for m in k..=max {
            let inj: Vec<Vec<usize>> = permutations(m)
                .into_iter()
                .map(|p| p[..k].to_vec())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            maps.insert((k, m), inj);
        }
    }
    let name = |k: usize, m: usize, f: &[usize]| {
        if k == m && f.iter().enumerate().all(|(i, &x)| i == x) {
            identity_name(&obj(k))
        } else {
            let digits: String = f.iter().map(|d| d.to_string()).collect();
            format!("{}>{}:{digits}", obj(k), obj(m))
        }
    };
    for (&(k, m), fs) in &maps {
        for f in fs {
            let n = name(k, m, f);
            if !n.starts_with("1_") {
                raw.morphism(n, obj(k), obj(m));
            }
        }
    }
    for (&(k, m), fs) in &maps {
        for f in fs {
            for l in m..=max {
                for g in &maps[&(m, l)] {
                    let gf: Vec<usize> = f.iter().map(|&i| g[i]).collect();
                    raw.composite(name(m, l, g), name(k, m, f), name(k, l, &gf));
                }
            }
        }
    }
    validate_category(&raw).unwrap()
}

/// Object ids `U<k>` of [`injections`] with `k ≤ bound`.
pub fn injection_objects_up_to(bound: usize) -> Vec<String> {
    (0..=bound).map(|k| format!("U{k}")).collect()
}

/// Every torsor structure on the set `{0..|G|-1}` with all equivariant
/// bijections, plus the inclusion of B G at the first torsor.
///
/// Torsors are the actions `g·φ(x) = φ(gx)` for bijections `φ: G → [n]`,
/// named `T0, T1, …` by their action tables; morphisms `Ti>Tj:<perm>`.
pub fn torsors(
    g: &FiniteGroupTable,
    prefix: &str,
) -> (Arc<FiniteCategory>, Arc<FiniteCategory>, Functor) {
    let n = g.order();
    assert!(n <= 5, "torsor universe grows factorially");
    let mut actions: BTreeMap<Vec<Vec<usize>>, Vec<usize>> = BTreeMap::new();
    for phi in permutations(n) {
        // act[a][p] = a·p
        let mut act = vec![vec![0; n]; n];
        for a in 0..n {
            for x in 0..n {
                act[a][phi[x]] = phi[g.mul(a, x)];
            }
        }
        actions.entry(act).or_insert(phi);
    }
    let torsors: Vec<(Vec<Vec<usize>>, Vec<usize>)> = actions.into_iter().collect();
    let bijections = permutations(n);
    let tname = |i: usize| format!("T{i}");
    let mname = |i: usize, j: usize, p: &[usize]| {
        if i == j && p.iter().enumerate().all(|(a, &b)| a == b) {
            identity_name(&tname(i))
        } else {
            let digits: String = p.iter().map(|d| d.to_string()).collect();
            format!("{}>{}:{digits}", tname(i), tname(j))
        }
    };
    let mut homs: BTreeMap<(usize, usize), Vec<&Vec<usize>>> = BTreeMap::new();
    for (i, (ai, _)) in torsors.iter().enumerate() {
        for (j, (aj, _)) in torsors.iter().enumerate() {
            let eq: Vec<&Vec<usize>> = bijections
                .iter()
                .filter(|psi| (0..n).all(|a| (0..n).all(|p| psi[ai[a][p]] == aj[a][psi[p]])))
                .collect();
            homs.insert((i, j), eq);
        }
    }
    let mut raw = RawCategory::default();
    for i in 0..torsors.len() {
        raw.object(tname(i));
    }
    for (&(i, j), ps) in &homs {
        for p in ps {
            let name = mname(i, j, p);
            if !name.starts_with("1_") {
                raw.morphism(name, tname(i), tname(j));
            }
        }
    }
    for (&(i, j), ps) in &homs {
        for p in ps {
            for k in 0..torsors.len() {
                for q in &homs[&(j, k)] {
                    let qp: Vec<usize> = p.iter().map(|&x| q[x]).collect();
                    raw.composite(mname(j, k, q), mname(i, j, p), mname(i, k, &qp));
                }
            }
        }
    }
    let tor = Arc::new(validate_category(&raw).expect("torsor groupoid is a category"));
    let bg = Arc::new(group_category(g, prefix));
    // g ↦ φ₀ ∘ r_{g⁻¹} ∘ φ₀⁻¹ where r_h(x) = x h.
    let phi0 = &torsors[0].1;
    let mut phi0_inv = vec![0; n];
    for (x, &p) in phi0.iter().enumerate() {
        phi0_inv[p] = x;
    }
    let t0 = tor.obj(&tname(0)).unwrap();
    let mut on_mor = vec![Mor(0); bg.num_morphisms()];
    for a in 0..n {
        let id = if a == g.identity() {
            identity_name("o")
        } else {
            format!("{prefix}{}", g.name(a))
        };
        let ainv = g.inv(a);
        let psi: Vec<usize> = (0..n).map(|p| phi0[g.mul(phi0_inv[p], ainv)]).collect();
        on_mor[bg.mor(&id).unwrap().0] = tor.mor(&mname(0, 0, &psi)).unwrap();
    }
    let inc =
        Functor::new(bg.clone(), tor.clone(), vec![t0], on_mor).expect("inclusion is a functor");
    (bg, tor, inc)
}
