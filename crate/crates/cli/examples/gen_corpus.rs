//! Regenerates the machine-built corpus files from the hand-written ones.
//!
//! cargo run --release -p lascat-cli --example gen_corpus

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use lascat_cli::{
    category_to_json, functor_to_json, parse_workspace, transformation_to_json, SourceFile,
};
use lascat_core::derive::product_with_projections;
use lascat_core::{zoo, FiniteCategory, Functor, Mor, NaturalTransformation, Obj};
use serde_json::{json, Value};

fn scalar(v: &Value) -> bool {
    !v.is_array() && !v.is_object()
}

/// Scalars, scalar arrays and objects of those go on one line.
fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Array(a) if a.iter().all(scalar) => {
            let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Object(m) if m.values().all(|x| inline(x).is_some() && !x.is_object()) => {
            let parts: Vec<String> = m
                .iter()
                .map(|(k, x)| format!("{}: {}", Value::from(k.as_str()), inline(x).unwrap()))
                .collect();
            Some(format!("{{{}}}", parts.join(", ")))
        }
        Value::Array(_) | Value::Object(_) => None,
        _ => Some(v.to_string()),
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    if let Some(s) = inline(v) {
        out.push_str(&s);
        return;
    }
    let pad = "  ".repeat(indent + 1);
    let (open, close, items): (char, char, Vec<(Option<&String>, &Value)>) = match v {
        // Names first, so an entry starts with what it is.
        Value::Object(m) => {
            let mut items: Vec<(Option<&String>, &Value)> =
                m.iter().map(|(k, x)| (Some(k), x)).collect();
            items.sort_by_key(|(k, _)| k.map(|k| k != "name"));
            ('{', '}', items)
        }
        Value::Array(a) => ('[', ']', a.iter().map(|x| (None, x)).collect()),
        _ => unreachable!(),
    };
    out.push(open);
    out.push('\n');
    for (i, (k, x)) in items.iter().enumerate() {
        out.push_str(&pad);
        if let Some(k) = k {
            write!(out, "{}: ", Value::from(k.as_str())).unwrap();
        }
        write_value(x, indent + 1, out);
        out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
    }
    write!(out, "{}{close}", "  ".repeat(indent)).unwrap();
}

fn save(dir: &Path, file: &str, doc: Value) {
    let mut s = String::new();
    write_value(&doc, 0, &mut s);
    s.push('\n');
    std::fs::write(dir.join(file), s).unwrap();
    println!("wrote {file}");
}

fn identity_functor_json(name: &str, cat: &str, c: &Arc<FiniteCategory>) -> Value {
    functor_to_json(name, cat, cat, &Functor::identity(c.clone()))
}

fn groups() -> Value {
    let mut cats = Vec::new();
    let named = [
        ("BS2", zoo::symmetric_group(2)),
        ("BS3", zoo::symmetric_group(3)),
        ("BS4", zoo::symmetric_group(4)),
        ("BZ3", zoo::cyclic_group(3)),
        ("BZ4", zoo::cyclic_group(4)),
    ];
    for (n, c) in &named {
        cats.push(category_to_json(n, c));
    }
    let s3 = Arc::new(named[1].1.clone());
    let id = Arc::new(Functor::identity(s3.clone()));
    // A component that does not commute with everything breaks naturality.
    let m = s3
        .non_identities()
        .find(|&m| {
            s3.morphism_indices()
                .any(|q| s3.compose_unchecked(q, m) != s3.compose_unchecked(m, q))
        })
        .unwrap();
    let t = NaturalTransformation::new(id.clone(), id, vec![m]).unwrap();
    json!({
        "categories": cats,
        "functors": [identity_functor_json("IdBS3", "BS3", &s3)],
        "transformations": [transformation_to_json("ConjugateBS3", "IdBS3", "IdBS3", &t)],
    })
}

fn products(ws: &lascat_cli::Workspace) -> Value {
    let pairs = [
        ("BZ2", "Chain2"),
        ("CirclePoset", "Vee"),
        ("CirclePoset", "Wedge"),
        ("FaceBoundaryTriangle", "Chain2"),
        ("BS3", "Wedge"),
    ];
    let mut cats = Vec::new();
    let mut funs = Vec::new();
    for (a, b) in pairs {
        let ca = ws.category(a).unwrap().category();
        let cb = ws.category(b).unwrap().category();
        let (p, p1, _) = product_with_projections(ca, cb);
        let name = format!("{a}x{b}");
        cats.push(category_to_json(&name, &p));
        funs.push(functor_to_json(&format!("{name}.proj"), &name, a, &p1));
    }
    json!({"categories": cats, "functors": funs})
}

fn unique(c: &FiniteCategory, a: Obj, b: Obj) -> Mor {
    let h = c.hom(a, b);
    assert_eq!(h.len(), 1, "poset categories have one map per relation");
    h[0]
}

/// `F = join` on a poset category with joins, with `ιᵢ: πᵢ ⇒ F`.
fn join_embedding(name: &str, c: &Arc<FiniteCategory>) -> (Vec<Value>, Vec<Value>, Vec<Value>) {
    let (p, p1, p2) = product_with_projections(c, c);
    let join = |a: Obj, b: Obj| {
        let ups: Vec<Obj> = c
            .object_indices()
            .filter(|&u| !c.hom(a, u).is_empty() && !c.hom(b, u).is_empty())
            .collect();
        *ups.iter()
            .find(|&&u| ups.iter().all(|&v| !c.hom(u, v).is_empty()))
            .expect("joins exist")
    };
    let on_objects: Vec<Obj> = p
        .object_indices()
        .map(|x| join(p1.on_obj(x), p2.on_obj(x)))
        .collect();
    let on_morphisms: Vec<Mor> = p
        .morphism_indices()
        .map(|m| unique(c, on_objects[p.src(m).0], on_objects[p.tgt(m).0]))
        .collect();
    let f = Arc::new(Functor::new(p.clone(), c.clone(), on_objects, on_morphisms).unwrap());
    let (p1, p2) = (Arc::new(p1), Arc::new(p2));
    let comps = |pi: &Functor| {
        p.object_indices()
            .map(|x| unique(c, pi.on_obj(x), f.on_obj(x)))
            .collect::<Vec<_>>()
    };
    let i1 = NaturalTransformation::new(p1.clone(), f.clone(), comps(&p1)).unwrap();
    let i2 = NaturalTransformation::new(p2.clone(), f.clone(), comps(&p2)).unwrap();
    let prod = format!("{name}x{name}");
    let cats = vec![category_to_json(&prod, &p)];
    let funs = vec![
        functor_to_json(&format!("{name}.pi1"), &prod, name, &p1),
        functor_to_json(&format!("{name}.pi2"), &prod, name, &p2),
        functor_to_json(&format!("{name}.join"), &prod, name, &f),
    ];
    let nts = vec![
        transformation_to_json(
            &format!("{name}.i1"),
            &format!("{name}.pi1"),
            &format!("{name}.join"),
            &i1,
        ),
        transformation_to_json(
            &format!("{name}.i2"),
            &format!("{name}.pi2"),
            &format!("{name}.join"),
            &i2,
        ),
    ];
    (cats, funs, nts)
}

fn joint_embeddings(ws: &lascat_cli::Workspace) -> Value {
    let (mut cats, mut funs, mut nts) = (Vec::new(), Vec::new(), Vec::new());
    for name in ["Chain3", "Bool2"] {
        let (c, f, t) = join_embedding(name, ws.category(name).unwrap().category());
        cats.extend(c);
        funs.extend(f);
        nts.extend(t);
    }
    json!({"categories": cats, "functors": funs, "transformations": nts})
}

fn injections(max: usize) -> Value {
    let c = zoo::injections(max);
    let mut v = category_to_json(&format!("FinInj{max}"), &c);
    let subsets: serde_json::Map<String, Value> = (0..max)
        .map(|k| (format!("size<={k}"), json!(zoo::injection_objects_up_to(k))))
        .collect();
    v["subsets"] = Value::Object(subsets);
    json!({"categories": [v]})
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let hand: Vec<SourceFile> = ["basics.json", "posets.json", "complexes.json"]
        .iter()
        .map(|f| SourceFile::read(&dir.join(f)).unwrap())
        .collect();
    save(&dir, "groups.json", groups());
    let mut files = hand.clone();
    files.push(SourceFile::read(&dir.join("groups.json")).unwrap());
    let ws = parse_workspace(&files).unwrap();
    save(&dir, "products.json", products(&ws));
    save(&dir, "joint_embeddings.json", joint_embeddings(&ws));
    for k in 3..=5 {
        save(&dir, &format!("fininj{k}.json"), injections(k));
    }
}
