//! One function per command; each returns the `result` part of a report.

use std::sync::Arc;

use lascat_core::amalgam::{iterate_construction, SpanPolicy};
use lascat_core::complex::{
    barycentric_subdivide, face_poset, simplicial_homology, SimplicialComplex,
};
use lascat_core::fibration::{
    check_functor_property, check_functorial_joint_embedding, FunctorProperty,
};
use lascat_core::group::tietze_simplify;
use lascat_core::homotopy::{homotopy_equivalence_certify, quillen_a_certify, QuillenSide};
use lascat_core::karoubi::{idempotents, karoubi_envelope};
use lascat_core::lascar::{lascar_group, verify_main_theorem, LascarError, TheoremVerdict};
use lascat_core::nerve::{nerve_homology, nerve_truncated};
use lascat_core::pi1::pi1_presentation;
use lascat_core::properties::{check_category_property, CategoryProperty};
use lascat_core::{
    Budget, FiniteCategory, HomologyResult, Obj, PropertyReport, ResourceLimit, Verdict, Witness,
};
use serde_json::{json, Value};

use crate::report::{Outcome, Report};
use crate::workspace::{CategoryItem, ComplexItem, FunctorItem, Workspace};
use crate::{Command, CommandError, Flags};

/// Lists longer than this are summarized by their length.
const LIST_LIMIT: usize = 200;

type Output = Result<(Outcome, Value), CommandError>;

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Usage(msg.into())
}

pub fn run_command(
    ws: &Workspace,
    command: Command,
    flags: &Flags,
) -> Result<Report, CommandError> {
    let budget = Budget::new(flags.max_steps());
    let (outcome, result) = match command {
        Command::Validate => validate(ws, flags),
        Command::Props => props(ws, flags, &budget),
        Command::Pi1 => pi1(ws, flags, &budget),
        Command::Homology => homology(ws, flags, &budget),
        Command::Lascar => lascar(ws, flags),
        Command::MainTheorem => main_theorem(ws, flags, &budget),
        Command::QuillenA => quillen(ws, flags, &budget),
        Command::Equiv => equiv(ws, flags, &budget),
        Command::Amalgamate => amalgamate(ws, flags, &budget),
        Command::Karoubi => karoubi(ws, flags, &budget),
        Command::FacePoset => face_poset_cmd(ws, flags, &budget),
        Command::Subdivide => subdivide(ws, flags, &budget),
    }?;
    let data = json!({
        "command": {"name": command.name(), "flags": flags.echo()},
        "budgets": {
            "max_dim": flags.max_dim(),
            "max_cosets": flags.max_cosets(),
            "max_objects": flags.max_objects(),
            "max_steps": flags.max_steps(),
        },
        "outcome": outcome.name(),
        "result": result,
        "resources": {"steps_used": budget.used().min(budget.limit())},
    });
    Ok(Report { outcome, data })
}

fn category<'a>(ws: &'a Workspace, flags: &Flags) -> Result<&'a CategoryItem, CommandError> {
    let name = flags
        .category
        .as_deref()
        .ok_or_else(|| usage("--category is required"))?;
    ws.category(name)
        .ok_or_else(|| usage(format!("unknown category `{name}`")))
}

fn functor<'a>(
    ws: &'a Workspace,
    name: Option<&str>,
    flag: &str,
) -> Result<&'a FunctorItem, CommandError> {
    let name = name.ok_or_else(|| usage(format!("--{flag} is required")))?;
    ws.functor(name)
        .ok_or_else(|| usage(format!("unknown functor `{name}`")))
}

fn complex<'a>(ws: &'a Workspace, flags: &Flags) -> Result<&'a ComplexItem, CommandError> {
    let name = flags
        .complex
        .as_deref()
        .ok_or_else(|| usage("--complex is required"))?;
    ws.complex(name)
        .ok_or_else(|| usage(format!("unknown complex `{name}`")))
}

fn object(c: &FiniteCategory, name: &str) -> Result<Obj, CommandError> {
    c.obj(name)
        .ok_or_else(|| usage(format!("unknown object `{name}`")))
}

/// `--sub`: a declared subset name, else a comma list; default all objects.
fn small_objects(item: &CategoryItem, flags: &Flags) -> Result<Vec<Obj>, CommandError> {
    let c = item.category();
    match flags.sub.as_deref() {
        None => Ok(c.object_indices().collect()),
        Some(s) => match item.subsets.get(s) {
            Some(names) => names.iter().map(|n| object(c, n)).collect(),
            None => s.split(',').map(|n| object(c, n.trim())).collect(),
        },
    }
}

fn target_object(c: &FiniteCategory, flags: &Flags) -> Result<Obj, CommandError> {
    match flags.at.as_deref() {
        Some(n) => object(c, n),
        None if c.num_objects() == 1 => Ok(Obj(0)),
        None => Err(usage(
            "--at is required when the category has more than one object",
        )),
    }
}

fn limit_json(e: &ResourceLimit) -> Value {
    json!({"kind": "resource_limit", "what": e.what, "used": e.used, "limit": e.limit})
}

pub fn homology_json(h: &HomologyResult) -> Value {
    let display: Vec<String> = h.groups.iter().map(|g| g.to_string()).collect();
    json!({"max_dim": h.max_dim, "groups": h.groups, "display": display})
}

fn verdict_outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Holds => Outcome::Success,
        Verdict::Fails => Outcome::Fails,
        Verdict::Unknown => Outcome::Undecided,
    }
}

fn report_json(r: &PropertyReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn names<'a>(c: &'a FiniteCategory, objs: &[Obj]) -> Vec<&'a str> {
    objs.iter().map(|&o| c.obj_id(o)).collect()
}

fn capped<T: serde::Serialize>(items: &[T]) -> Value {
    if items.len() <= LIST_LIMIT {
        json!(items)
    } else {
        json!({"omitted": items.len()})
    }
}

fn validate(ws: &Workspace, flags: &Flags) -> Output {
    let summary = |item: &CategoryItem| {
        let c = item.category();
        json!({
            "name": item.name,
            "provenance": item.provenance,
            "form": item.source.form(),
            "objects": c.num_objects(),
            "morphisms": c.num_morphisms(),
            "subsets": item.subsets,
        })
    };
    if flags.category.is_some() {
        let item = category(ws, flags)?;
        let mut v = summary(item);
        v["object_ids"] = capped(item.category().objects());
        return Ok((Outcome::Success, v));
    }
    let functors: Vec<Value> = ws
        .functors
        .iter()
        .map(|f| json!({"name": f.name, "provenance": f.provenance, "dom": f.dom, "cod": f.cod}))
        .collect();
    let transformations: Vec<Value> = ws
        .transformations
        .iter()
        .map(|t| {
            json!({
                "name": t.name,
                "provenance": t.provenance,
                "source": t.source,
                "target": t.target,
                "natural": t.transformation.is_natural(),
            })
        })
        .collect();
    let complexes: Vec<Value> = ws
        .complexes
        .iter()
        .map(|k| {
            json!({
                "name": k.name,
                "provenance": k.provenance,
                "vertices": k.complex.vertices().len(),
                "facets": k.complex.facets().len(),
                "dim": k.complex.dim(),
            })
        })
        .collect();
    let categories: Vec<Value> = ws.categories.iter().map(summary).collect();
    Ok((
        Outcome::Success,
        json!({
            "categories": categories,
            "functors": functors,
            "transformations": transformations,
            "complexes": complexes,
        }),
    ))
}

fn props(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let mut outcome = Outcome::Success;
    let selective = !flags.property.is_empty();
    let mut out = json!({});
    if flags.category.is_some() {
        let c = category(ws, flags)?.category();
        let chosen: Vec<CategoryProperty> = if selective && flags.functor.is_none() {
            flags
                .property
                .iter()
                .map(|p| p.parse().map_err(usage))
                .collect::<Result<_, _>>()?
        } else if selective {
            Vec::new()
        } else {
            CategoryProperty::ALL.to_vec()
        };
        let reports: Vec<PropertyReport> = chosen
            .iter()
            .map(|&p| check_category_property(c, p, budget))
            .collect();
        if selective {
            outcome = reports
                .iter()
                .fold(outcome, |o, r| o.combine(verdict_outcome(r.verdict)));
        }
        out["category"] = json!(reports.iter().map(report_json).collect::<Vec<_>>());
    }
    if flags.functor.is_some() && flags.fje.is_empty() {
        let f = &functor(ws, flags.functor.as_deref(), "functor")?.functor;
        let chosen: Vec<FunctorProperty> = if selective {
            flags
                .property
                .iter()
                .map(|p| p.parse().map_err(usage))
                .collect::<Result<_, _>>()?
        } else {
            FunctorProperty::ALL.to_vec()
        };
        let reports: Vec<PropertyReport> = chosen
            .iter()
            .map(|&p| check_functor_property(f, p, budget))
            .collect();
        if selective {
            outcome = reports
                .iter()
                .fold(outcome, |o, r| o.combine(verdict_outcome(r.verdict)));
        }
        out["functor"] = json!(reports.iter().map(report_json).collect::<Vec<_>>());
    }
    if !flags.fje.is_empty() {
        let [f, i1, i2] = flags.fje.as_slice() else {
            return Err(usage("--fje takes F,i1,i2"));
        };
        let f = functor(ws, Some(f), "fje")?;
        let t = |n: &str| {
            ws.transformation(n)
                .map(|t| &t.transformation)
                .ok_or_else(|| usage(format!("unknown transformation `{n}`")))
        };
        let r = check_functorial_joint_embedding(f.functor.cod(), &f.functor, t(i1)?, t(i2)?)
            .map_err(|e| usage(e.to_string()))?;
        outcome = outcome.combine(verdict_outcome(r.verdict));
        out["joint_embedding"] = report_json(&r);
    }
    if out.as_object().is_some_and(|m| m.is_empty()) {
        return Err(usage("props needs --category, --functor or --fje"));
    }
    Ok((outcome, out))
}

fn pi1(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let c = category(ws, flags)?.category();
    if c.is_empty() {
        return Err(usage("π₁ of the empty category has no basepoint"));
    }
    let base = match flags.basepoint.as_deref() {
        Some(n) => object(c, n)?,
        None => Obj(0),
    };
    let pres = pi1_presentation(c, base);
    let gens: Vec<&str> = pres.generators.iter().map(|&m| c.mor_id(m)).collect();
    let mut out = json!({
        "basepoint": c.obj_id(base),
        "component": names(c, &pres.component),
        "presentation": {
            "generators": gens.len(),
            "relators": pres.presentation.relators.len(),
            "generator_ids": capped(&gens),
            "relator_words": capped(&pres.presentation.relator_strings()),
        },
    });
    let simplified = |p: &lascat_core::group::GroupPresentation, exhausted: bool| {
        json!({
            "generators": p.generators,
            "relators": capped(&p.relator_strings()),
            "total_length": p.total_length(),
            "exhausted": exhausted,
        })
    };
    let Some(max_cosets) = flags.identify else {
        let t = tietze_simplify(&pres.presentation, budget);
        out["simplified"] = simplified(&t.presentation, t.exhausted);
        return Ok(match t.presentation.abelianization(budget) {
            Ok(ab) => {
                out["abelianization"] = json!(ab);
                out["order"] = Value::Null;
                (Outcome::Success, out)
            }
            Err(e) => {
                out["abelianization"] = limit_json(&e);
                (Outcome::Undecided, out)
            }
        });
    };
    match pres.identify(max_cosets, budget) {
        Err(e) => {
            out["identification"] = limit_json(&e);
            Ok((Outcome::Undecided, out))
        }
        Ok(g) => {
            out["simplified"] = simplified(&g.tietze.presentation, g.tietze.exhausted);
            out["abelianization"] = json!(g.abelianization);
            match &g.group {
                Ok(e) => {
                    out["order"] = json!(e.order());
                    out["group"] = json!(e.table.summary());
                    Ok((Outcome::Success, out))
                }
                Err(e) => {
                    out["order"] = Value::Null;
                    out["identification"] = limit_json(e);
                    Ok((Outcome::Undecided, out))
                }
            }
        }
    }
}

fn homology(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let d = flags.max_dim();
    if flags.complex.is_some() {
        let k = complex(ws, flags)?;
        return Ok(match simplicial_homology(&k.complex, d, budget) {
            Ok(h) => (
                Outcome::Success,
                json!({"source": "simplicial", "homology": homology_json(&h)}),
            ),
            Err(e) => (
                Outcome::Undecided,
                json!({"source": "simplicial", "homology": limit_json(&e)}),
            ),
        });
    }
    let c = category(ws, flags)?.category();
    let result =
        nerve_truncated(c, d + 1, budget).and_then(|n| Ok((n.counts(), n.homology(d, budget)?)));
    Ok(match result {
        Ok((counts, h)) => (
            Outcome::Success,
            json!({"source": "nerve", "simplices": counts, "homology": homology_json(&h)}),
        ),
        Err(e) => (
            Outcome::Undecided,
            json!({"source": "nerve", "homology": limit_json(&e)}),
        ),
    })
}

fn lascar(ws: &Workspace, flags: &Flags) -> Output {
    let item = category(ws, flags)?;
    let c = item.category();
    let (c0, u) = (small_objects(item, flags)?, target_object(c, flags)?);
    match lascar_group(c, &c0, u, flags.normal_closure) {
        Ok(l) => {
            let mut v = l.to_json(c);
            v["target"] = json!(c.obj_id(u));
            v["quotient_trivial"] = json!(l.gal().map(|g| g.order() == 1));
            Ok((Outcome::Success, v))
        }
        Err(e) => {
            let outcome = match e {
                LascarError::EnumerationFailed(_) => Outcome::Undecided,
                _ => Outcome::Fails,
            };
            let w = Witness::new("lascar_error").with("error", e.to_string());
            Ok((outcome, json!({"target": c.obj_id(u), "witness": w})))
        }
    }
}

fn main_theorem(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let item = category(ws, flags)?;
    let c = item.category();
    let (c0, u) = (small_objects(item, flags)?, target_object(c, flags)?);
    let r = verify_main_theorem(c, &c0, u, flags.max_cosets(), budget);
    let outcome = match r.verdict {
        TheoremVerdict::Holds => Outcome::Success,
        TheoremVerdict::Fails | TheoremVerdict::HypothesesNotMet => Outcome::Fails,
        TheoremVerdict::EnumerationFailed => Outcome::Undecided,
    };
    let mut v = serde_json::to_value(&r).expect("reports serialize");
    v["small_objects"] = json!(names(c, &c0));
    v["target"] = json!(c.obj_id(u));
    Ok((outcome, v))
}

fn quillen(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let f = functor(ws, flags.functor.as_deref(), "functor")?;
    let side: QuillenSide = flags
        .side
        .as_deref()
        .unwrap_or("slice")
        .parse()
        .map_err(usage)?;
    let r = quillen_a_certify(&f.functor, side, flags.max_dim(), budget);
    Ok((verdict_outcome(r.verdict), report_json(&r)))
}

fn equiv(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let f = functor(ws, flags.functor.as_deref(), "functor")?;
    let g = functor(ws, flags.inverse.as_deref(), "inverse")?;
    let evidence = flags
        .evidence
        .iter()
        .map(|n| {
            ws.transformation(n)
                .map(|t| t.transformation.clone())
                .ok_or_else(|| usage(format!("unknown transformation `{n}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let r = homotopy_equivalence_certify(
        &f.functor,
        &g.functor,
        &evidence,
        flags.max_dim(),
        flags.max_cosets(),
        budget,
    )
    .map_err(|e| usage(e.to_string()))?;
    Ok((verdict_outcome(r.verdict), report_json(&r)))
}

fn span_policy(flags: &Flags) -> Result<SpanPolicy, CommandError> {
    match flags.spans.as_deref().unwrap_or("all") {
        "all" => Ok(SpanPolicy::All),
        "missing" => Ok(SpanPolicy::Missing),
        list => list
            .split(',')
            .map(|pair| match pair.split_once(':') {
                Some((f, g)) => Ok((f.trim().to_string(), g.trim().to_string())),
                None => Err(usage(format!("span `{pair}` is not of the form f:g"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SpanPolicy::Named),
    }
}

fn amalgamate(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let c = category(ws, flags)?.category();
    let policy = span_policy(flags)?;
    let (d, rounds) = (flags.max_dim(), flags.rounds.unwrap_or(1));
    let stages = match iterate_construction(c, rounds, &policy, d, flags.max_objects(), budget) {
        Err(e) => return Ok((Outcome::Undecided, json!({"construction": limit_json(&e)}))),
        Ok(Err(e)) => return Err(usage(e.to_string())),
        Ok(Ok(s)) => s,
    };
    let h0 = nerve_homology(c, d, budget);
    let mut out = vec![json!({
        "stage": 0,
        "objects": c.num_objects(),
        "morphisms": c.num_morphisms(),
        "all_mono": report_json(&check_category_property(c, CategoryProperty::AllMono, budget)),
        "homology": match &h0 { Ok(h) => homology_json(h), Err(e) => limit_json(e) },
    })];
    let mut outcome = Outcome::Success;
    for s in &stages[1..] {
        let r = s.report.as_ref().expect("later stages carry a report");
        outcome = outcome.combine(verdict_outcome(r.ap_previous.verdict));
        let added: Vec<&str> = s
            .amalgams
            .iter()
            .map(|a| s.category.obj_id(a.object))
            .collect();
        out.push(json!({
            "stage": r.stage,
            "objects": r.objects,
            "morphisms": r.morphisms,
            "split_objects": r.split_objects,
            "amalgams": capped(&added),
            "ap_previous": report_json(&r.ap_previous),
            "all_mono": report_json(&r.all_mono),
            "homology": r.homology.as_ref().map(homology_json),
            "homology_stable": r.homology_stable,
        }));
    }
    Ok((outcome, json!({"rounds": rounds, "stages": out})))
}

fn karoubi(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let c = category(ws, flags)?.category();
    let split: Vec<Value> = idempotents(c)
        .into_iter()
        .filter(|&(_, e)| !c.is_identity(e))
        .map(|(x, e)| json!({"object": c.obj_id(x), "idempotent": c.mor_id(e)}))
        .collect();
    let (k, _) = karoubi_envelope(c);
    if k.num_objects() > flags.max_objects() {
        let e = ResourceLimit {
            what: "envelope objects".into(),
            used: k.num_objects() as u64,
            limit: flags.max_objects() as u64,
        };
        return Ok((Outcome::Undecided, json!({"envelope": limit_json(&e)})));
    }
    let added: Vec<&str> = k
        .objects()
        .iter()
        .filter(|o| c.obj(o).is_none())
        .map(String::as_str)
        .collect();
    let d = flags.max_dim();
    let (hc, hk) = (nerve_homology(c, d, budget), nerve_homology(&k, d, budget));
    let agree = match (&hc, &hk) {
        (Ok(a), Ok(b)) => Some(a == b),
        _ => None,
    };
    let h = |r: &Result<HomologyResult, ResourceLimit>| match r {
        Ok(h) => homology_json(h),
        Err(e) => limit_json(e),
    };
    let outcome = if agree.is_some() {
        Outcome::Success
    } else {
        Outcome::Undecided
    };
    Ok((
        outcome,
        json!({
            "nontrivial_idempotents": split,
            "objects": k.num_objects(),
            "morphisms": k.num_morphisms(),
            "new_objects": added,
            "homology": {"category": h(&hc), "envelope": h(&hk), "agree": agree},
        }),
    ))
}

fn compare(
    name: &str,
    k: &SimplicialComplex,
    c: &Arc<FiniteCategory>,
    d: usize,
    budget: &Budget,
) -> (Outcome, Value) {
    let hk = simplicial_homology(k, d, budget);
    let hc = nerve_homology(c, d, budget);
    match (hk, hc) {
        (Ok(a), Ok(b)) => {
            let agree = a == b;
            let outcome = if agree {
                Outcome::Success
            } else {
                Outcome::Fails
            };
            (
                outcome,
                json!({"complex": homology_json(&a), name: homology_json(&b), "agree": agree}),
            )
        }
        (Err(e), _) | (_, Err(e)) => (Outcome::Undecided, limit_json(&e)),
    }
}

fn face_poset_cmd(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let k = complex(ws, flags)?;
    let (p, c) = face_poset(&k.complex);
    let c = Arc::new(c);
    let el = p.elements();
    let covers: Vec<(&str, &str)> = p
        .covers()
        .into_iter()
        .map(|(a, b)| (el[a].as_str(), el[b].as_str()))
        .collect();
    let (outcome, h) = compare("face_poset", &k.complex, &c, flags.max_dim(), budget);
    Ok((
        outcome,
        json!({"elements": capped(el), "covers": capped(&covers), "homology": h}),
    ))
}

fn subdivide(ws: &Workspace, flags: &Flags, budget: &Budget) -> Output {
    let k = complex(ws, flags)?;
    let sd = barycentric_subdivide(&k.complex);
    let d = flags.max_dim();
    let (a, b) = (
        simplicial_homology(&k.complex, d, budget),
        simplicial_homology(&sd, d, budget),
    );
    let (outcome, h) = match (a, b) {
        (Ok(a), Ok(b)) => {
            let agree = a == b;
            let o = if agree {
                Outcome::Success
            } else {
                Outcome::Fails
            };
            (
                o,
                json!({"complex": homology_json(&a), "subdivision": homology_json(&b), "agree": agree}),
            )
        }
        (Err(e), _) | (_, Err(e)) => (Outcome::Undecided, limit_json(&e)),
    };
    Ok((
        outcome,
        json!({
            "vertices": sd.vertices().len(),
            "facets": capped(&sd.facet_names()),
            "dim": sd.dim(),
            "homology": h,
        }),
    ))
}
