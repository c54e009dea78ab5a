//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use lascat_cli::{
    bundled_corpus, parse_workspace, run_command, CategorySource, Command, Flags, Report, Workspace,
};
use lascat_core::complex::simplicial_homology;
use lascat_core::fibration::check_functorial_joint_embedding;
use lascat_core::group::tietze_simplify;
use lascat_core::homotopy::{quillen_a_certify, QuillenSide};
use lascat_core::lascar::lascar_group;
use lascat_core::nerve::nerve_homology;
use lascat_core::pi1::pi1_presentation;
use lascat_core::properties::{holds, CategoryProperty};
use lascat_core::{Budget, FiniteCategory, HomologyGroup, Obj, Verdict};
use num_bigint::BigInt;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn(&Workspace) -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn flags(category: &str) -> Flags {
    Flags {
        category: Some(category.into()),
        ..Flags::default()
    }
}

fn run(ws: &Workspace, cmd: Command, f: &Flags) -> Result<Report, String> {
    run_command(ws, cmd, f).map_err(|e| format!("{} failed: {e}", cmd.name()))
}

fn at<'a>(r: &'a Report, path: &str) -> &'a Value {
    r.get(path).unwrap_or(&Value::Null)
}

fn big() -> Budget {
    Budget::new(2_000_000_000)
}

fn timed<T>(
    limit: Duration,
    what: &str,
    f: impl FnOnce() -> Result<T, String>,
) -> Result<(T, Duration), String> {
    let t = Instant::now();
    let out = f()?;
    let dt = t.elapsed();
    ensure!(dt < limit, "{what} took {dt:?}, limit {limit:?}");
    Ok((out, dt))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn symmetric_groups(ws: &Workspace) -> Check {
    let mut notes = Vec::new();
    for n in 2..=4u64 {
        let name = format!("BS{n}");
        let expected = factorial(n);
        let (_, dt) = timed(Duration::from_secs(10), &name, || {
            let pi1 = run(
                ws,
                Command::Pi1,
                &Flags {
                    identify: Some(1000),
                    basepoint: Some("o".into()),
                    ..flags(&name)
                },
            )?;
            ensure!(
                at(&pi1, "/result/order") == &Value::from(expected),
                "{name}: π₁ order {}",
                at(&pi1, "/result/order")
            );
            let l = run(
                ws,
                Command::Lascar,
                &Flags {
                    sub: Some("o".into()),
                    at: Some("o".into()),
                    ..flags(&name)
                },
            )?;
            ensure!(
                at(&l, "/result/gal/order") == &Value::from(expected),
                "{name}: Gal order {}",
                at(&l, "/result/gal/order")
            );
            let m = run(
                ws,
                Command::MainTheorem,
                &Flags {
                    sub: Some("o".into()),
                    max_cosets: Some(1000),
                    ..flags(&name)
                },
            )?;
            ensure!(
                at(&m, "/result/verdict") == "Holds",
                "{name}: main theorem {}",
                at(&m, "/result/verdict")
            );
            Ok(())
        })?;
        notes.push(format!(
            "{name} |π₁|=|Gal|={expected} ({:.2}s)",
            dt.as_secs_f64()
        ));
    }
    Ok(notes.join(", "))
}

fn injections(ws: &Workspace) -> Check {
    let ((), dt) = timed(Duration::from_secs(60), "FinInj5", || {
        let f = Flags {
            sub: Some("size<=3".into()),
            at: Some("U5".into()),
            ..flags("FinInj5")
        };
        let m = run(ws, Command::MainTheorem, &f)?;
        for key in ["universal", "strongly_homogeneous"] {
            let v = at(&m, &format!("/result/{key}/verdict"));
            ensure!(v == "Holds", "{key}: {v}");
        }
        ensure!(
            at(&m, "/result/verdict") == "Holds",
            "verdict {}",
            at(&m, "/result/verdict")
        );
        ensure!(
            at(&m, "/result/gal/order") == 1,
            "Gal order {}",
            at(&m, "/result/gal/order")
        );
        ensure!(
            at(&m, "/result/pi1/order") == 1,
            "π₁ order {}",
            at(&m, "/result/pi1/order")
        );
        // The same two groups again, each from its own module.
        let c = ws.category("FinInj5").unwrap().category();
        let small: Vec<Obj> = (0..=3).map(|k| c.obj(&format!("U{k}")).unwrap()).collect();
        let u = c.obj("U5").unwrap();
        let gal = lascar_group(c, &small, u, false).map_err(|e| e.to_string())?;
        ensure!(
            gal.gal().map(|g| g.order()) == Some(1),
            "direct Gal is not trivial"
        );
        let g = pi1_presentation(c, u)
            .identify(1000, &big())
            .map_err(|e| e.to_string())?;
        ensure!(g.order() == Some(1), "direct π₁ order {:?}", g.order());
        Ok(())
    })?;
    Ok(format!(
        "Gal_L = π₁ = 1, Lst order 120 ({:.2}s)",
        dt.as_secs_f64()
    ))
}

/// Prime-power decomposition of a list of cyclic orders.
fn elementary_divisors(orders: &[BigInt]) -> Vec<u64> {
    let mut out = Vec::new();
    for o in orders {
        let mut n = u64::try_from(o).expect("small torsion");
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

fn hurewicz(ws: &Workspace) -> Check {
    let b = big();
    for item in &ws.categories {
        let c = item.category();
        let h1 = nerve_homology(c, 1, &b).map_err(|e| format!("{}: {e}", item.name))?;
        let (mut rank, mut torsion) = (0, Vec::new());
        for comp in c.components() {
            let pres = pi1_presentation(c, comp[0]);
            let t = tietze_simplify(&pres.presentation, &b);
            let ab = t
                .presentation
                .abelianization(&b)
                .map_err(|e| e.to_string())?;
            rank += ab.rank;
            torsion.extend(ab.torsion);
        }
        let g: &HomologyGroup = h1.degree(1);
        ensure!(
            g.betti == rank && elementary_divisors(&g.torsion) == elementary_divisors(&torsion),
            "{}: H₁ = {g} but π₁^ab has rank {rank}, torsion {torsion:?}",
            item.name
        );
    }
    let required = [
        "BZ2",
        "BS3",
        "CirclePoset",
        "WalkingArrow",
        "WalkingSpan",
        "WalkingIdempotent",
        "FaceBoundaryTriangle",
    ];
    ensure!(
        ws.categories.len() >= 10,
        "only {} instances",
        ws.categories.len()
    );
    for r in required {
        ensure!(ws.category(r).is_some(), "corpus lacks {r}");
    }
    let face = ws
        .categories
        .iter()
        .filter(|c| matches!(c.source, CategorySource::FacePoset(_)))
        .count();
    Ok(format!(
        "{} instances, {face} face posets",
        ws.categories.len()
    ))
}

/// Normalized bar complex of Z/2: one chain per degree, ∂ₙ = 1 + (−1)ⁿ.
fn bz2_oracle(d: usize) -> Vec<String> {
    let boundary = |n: usize| -> i64 {
        if n == 0 {
            0
        } else if n.is_multiple_of(2) {
            2
        } else {
            0
        }
    };
    (0..=d)
        .map(|n| {
            let kernel_is_z = boundary(n) == 0;
            let image = boundary(n + 1).abs();
            match (kernel_is_z, image) {
                (false, _) => "0".to_string(),
                (true, 0) => "Z".to_string(),
                (true, 1) => "0".to_string(),
                (true, k) => format!("Z/{k}"),
            }
        })
        .collect()
}

fn bz2_ladder(ws: &Workspace) -> Check {
    let (h, dt) = timed(Duration::from_secs(5), "BZ2 ladder", || {
        let r = run(
            ws,
            Command::Homology,
            &Flags {
                max_dim: Some(3),
                ..flags("BZ2")
            },
        )?;
        Ok(at(&r, "/result/homology/display").clone())
    })?;
    let expected = ["Z", "Z/2", "0", "Z/2"];
    ensure!(h == serde_json::json!(expected), "nerve gives {h}");
    let oracle = bz2_oracle(3);
    ensure!(oracle == expected, "oracle gives {oracle:?}");
    let c = ws.category("BZ2").unwrap().category();
    let p = pi1_presentation(c, Obj(0));
    let ab = p
        .presentation
        .abelianization(&big())
        .map_err(|e| e.to_string())?;
    ensure!(
        ab.rank == 0 && ab.torsion == [BigInt::from(2)],
        "π₁^ab = {ab:?}"
    );
    Ok(format!(
        "(Z, Z/2, 0, Z/2) matches the bar-complex oracle ({:.3}s)",
        dt.as_secs_f64()
    ))
}

/// Categories for which some functorial joint embedding in the corpus verifies.
fn joint_embedding_hosts(ws: &Workspace) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for f in &ws.functors {
        let users: Vec<_> = ws
            .transformations
            .iter()
            .filter(|t| t.target == f.name)
            .collect();
        for i1 in &users {
            for i2 in &users {
                let ok = check_functorial_joint_embedding(
                    f.functor.cod(),
                    &f.functor,
                    &i1.transformation,
                    &i2.transformation,
                )
                .is_ok_and(|r| r.is_holds());
                if ok {
                    out.entry(f.cod.clone()).or_insert_with(|| f.name.clone());
                }
            }
        }
    }
    out
}

fn contractibility(ws: &Workspace) -> Check {
    let fje = joint_embedding_hosts(ws);
    let mut checked = Vec::new();
    for item in &ws.categories {
        let c: &FiniteCategory = item.category();
        let b = big();
        let reason = if holds(c, CategoryProperty::Initial, &b) == Verdict::Holds {
            "initial"
        } else if holds(c, CategoryProperty::Terminal, &b) == Verdict::Holds {
            "terminal"
        } else if holds(c, CategoryProperty::Filtered, &b) == Verdict::Holds {
            "filtered"
        } else if fje.contains_key(&item.name) {
            "joint embedding"
        } else {
            continue;
        };
        let g = pi1_presentation(item.category(), Obj(0))
            .identify(10_000, &b)
            .map_err(|e| e.to_string())?;
        ensure!(
            g.order() == Some(1),
            "{} ({reason}): π₁ order {:?}",
            item.name,
            g.order()
        );
        let h = nerve_homology(c, 2, &b).map_err(|e| format!("{}: {e}", item.name))?;
        ensure!(h.is_acyclic(), "{} ({reason}): {h}", item.name);
        checked.push(item.name.as_str());
    }
    ensure!(fje.len() >= 2, "only {} joint embeddings verify", fje.len());
    Ok(format!(
        "{} instances, e.g. {}",
        checked.len(),
        checked
            .iter()
            .take(4)
            .cloned()
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

fn quillen(ws: &Workspace) -> Check {
    let mut certified = Vec::new();
    for f in ws.functors.iter().filter(|f| f.name.ends_with(".proj")) {
        let r = run(
            ws,
            Command::QuillenA,
            &Flags {
                functor: Some(f.name.clone()),
                ..Flags::default()
            },
        )?;
        if at(&r, "/result/verdict") != "Holds" {
            continue;
        }
        ensure!(
            at(&r, "/result/witness/fields/homology/agree") == true,
            "{}: certificate reports disagreement",
            f.name
        );
        let b = big();
        let dom = nerve_homology(f.functor.dom(), 2, &b).map_err(|e| e.to_string())?;
        let cod = nerve_homology(f.functor.cod(), 2, &b).map_err(|e| e.to_string())?;
        ensure!(dom == cod, "{}: {dom} vs {cod}", f.name);
        certified.push(f.name.as_str());
    }
    ensure!(
        certified.len() >= 3,
        "only {} projections certify",
        certified.len()
    );
    let inc = &ws.functor("IncB").ok_or("corpus lacks IncB")?.functor;
    let r = quillen_a_certify(inc, QuillenSide::Slice, 2, &big());
    let w = r.witness.as_ref().ok_or("no witness")?;
    ensure!(
        r.verdict == Verdict::Fails && w.kind == "empty_slice" && w.str("object") == Some("a"),
        "IncB gives {r}"
    );
    Ok(format!(
        "{} projections certify; IncB fails with empty slice at a",
        certified.len()
    ))
}

fn boolean_lattices(ws: &Workspace) -> Check {
    for name in ["Bool2", "Bool3"] {
        let r = run(
            ws,
            Command::Props,
            &Flags {
                property: vec!["Pushouts".into()],
                ..flags(name)
            },
        )?;
        ensure!(
            at(&r, "/result/category/0/verdict") == "Holds",
            "{name}: Pushouts {}",
            at(&r, "/result/category/0/verdict")
        );
        let h = nerve_homology(ws.category(name).unwrap().category(), 2, &big())
            .map_err(|e| e.to_string())?;
        ensure!(h.is_acyclic(), "{name}: {h}");
    }
    Ok("Bool2, Bool3 have pushouts and vanishing reduced homology".into())
}

fn construction(ws: &Workspace) -> Check {
    let (_, dt) = timed(Duration::from_secs(60), "construction", || {
        let r = run(
            ws,
            Command::Amalgamate,
            &Flags {
                rounds: Some(1),
                ..flags("WalkingSpan")
            },
        )?;
        ensure!(
            at(&r, "/result/stages/1/ap_previous/verdict") == "Holds",
            "walking span: AP(previous) fails"
        );
        let r = run(
            ws,
            Command::Amalgamate,
            &Flags {
                rounds: Some(2),
                ..flags("CirclePoset")
            },
        )?;
        let stages = at(&r, "/result/stages")
            .as_array()
            .cloned()
            .unwrap_or_default();
        ensure!(stages.len() == 3, "{} stages", stages.len());
        for s in &stages {
            let n = &s["stage"];
            ensure!(
                s["homology"]["display"] == serde_json::json!(["Z", "Z", "0"]),
                "stage {n}: {}",
                s["homology"]["display"]
            );
            ensure!(
                s["all_mono"]["verdict"] == "Holds",
                "stage {n}: AllMono {}",
                s["all_mono"]["verdict"]
            );
        }
        Ok(())
    })?;
    Ok(format!(
        "AP for stage-0 spans; circle tower keeps (Z, Z, 0) and AllMono ({:.2}s)",
        dt.as_secs_f64()
    ))
}

fn realization(ws: &Workspace) -> Check {
    for (name, degree) in [("BoundaryTriangle", 1usize), ("BoundaryTetrahedron", 2)] {
        let r = run(
            ws,
            Command::FacePoset,
            &Flags {
                complex: Some(name.into()),
                max_dim: Some(3),
                ..Flags::default()
            },
        )?;
        let got = at(&r, &format!("/result/homology/face_poset/display/{degree}"));
        ensure!(got == "Z", "{name}: H{degree} = {got}");
        ensure!(
            at(&r, "/result/homology/agree") == true,
            "{name}: face poset and complex disagree"
        );
        let k = &ws.complex(name).unwrap().complex;
        let oracle = simplicial_homology(k, 3, &big()).map_err(|e| e.to_string())?;
        ensure!(
            oracle.degree(degree).to_string() == "Z",
            "{name}: oracle {oracle}"
        );
    }
    let item = ws
        .category("FaceBoundaryTetrahedron")
        .ok_or("corpus lacks FaceBoundaryTetrahedron")?;
    let h = nerve_homology(item.category(), 2, &big()).map_err(|e| e.to_string())?;
    ensure!(
        h.degree(2).to_string() == "Z",
        "FaceBoundaryTetrahedron: {h}"
    );
    Ok("∂Δ² gives H₁ = Z, ∂Δ³ gives H₂ = Z, both matching simplicial homology".into())
}

/// Every command over every applicable corpus item, default budgets.
fn sweep(ws: &Workspace) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut push = |cmd: Command, f: Flags| -> Result<(), String> {
        let r = run(ws, cmd, &f)?;
        out.push(r.to_json());
        out.push(r.to_text());
        Ok(())
    };
    push(Command::Validate, Flags::default())?;
    for c in &ws.categories {
        let n = c.name.as_str();
        push(Command::Props, flags(n))?;
        push(
            Command::Pi1,
            Flags {
                identify: Some(1000),
                ..flags(n)
            },
        )?;
        push(Command::Homology, flags(n))?;
        push(Command::Karoubi, flags(n))?;
        let cat = c.category();
        if cat.num_objects() > 0 {
            let u = cat.obj_id(Obj(cat.num_objects() - 1)).to_string();
            push(
                Command::MainTheorem,
                Flags {
                    at: Some(u.clone()),
                    ..flags(n)
                },
            )?;
            push(
                Command::Lascar,
                Flags {
                    at: Some(u),
                    ..flags(n)
                },
            )?;
        }
        if cat.num_morphisms() <= 20 {
            push(Command::Amalgamate, flags(n))?;
        }
    }
    for f in &ws.functors {
        push(
            Command::QuillenA,
            Flags {
                functor: Some(f.name.clone()),
                ..Flags::default()
            },
        )?;
    }
    for k in &ws.complexes {
        push(
            Command::FacePoset,
            Flags {
                complex: Some(k.name.clone()),
                ..Flags::default()
            },
        )?;
        push(
            Command::Subdivide,
            Flags {
                complex: Some(k.name.clone()),
                ..Flags::default()
            },
        )?;
    }
    Ok(out)
}

fn determinism(_: &Workspace) -> Check {
    // Fresh workspaces, so nothing cached in the first pass can leak into the second.
    let a = sweep(&parse_workspace(&bundled_corpus()).map_err(|e| e.to_string())?)?;
    let b = sweep(&parse_workspace(&bundled_corpus()).map_err(|e| e.to_string())?)?;
    ensure!(a.len() == b.len(), "different report counts");
    if let Some(i) = (0..a.len()).find(|&i| a[i] != b[i]) {
        return Err(format!("report {i} differs between runs"));
    }
    Ok(format!(
        "{} reports byte-identical across two runs",
        a.len() / 2
    ))
}

fn main() {
    let ws = parse_workspace(&bundled_corpus()).expect("bundled corpus loads");
    let criteria: [Criterion; 10] = [
        ("symmetric-group Lascar/pi1 agreement", symmetric_groups),
        ("main theorem on injections", injections),
        ("Hurewicz suite", hurewicz),
        ("BZ2 homology ladder", bz2_ladder),
        ("contractibility criteria", contractibility),
        ("Quillen A shadow", quillen),
        ("Boolean lattices", boolean_lattices),
        ("finite amalgamation tower", construction),
        ("face-poset homotopy types", realization),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(|| check(&ws)))
            .unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
