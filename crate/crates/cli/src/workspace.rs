//! Input files: parsing, validation, provenance and serialization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use lascat_core::complex::{face_poset, SimplicialComplex};
use lascat_core::poset::Poset;
use lascat_core::{
    validate_category, FiniteCategory, Functor, NaturalTransformation, RawCategory, RawMorphism,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

/// Where an item was defined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub file: String,
    pub line: usize,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.file, self.line)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("{file}: {message}")]
    Io { file: String, message: String },
    #[error("{file}:{line}:{column}: syntax error: {message}")]
    Syntax {
        file: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{at}: invalid {kind} `{name}`: {message}")]
    Validation {
        at: Provenance,
        kind: &'static str,
        name: String,
        message: String,
    },
    #[error("{at}: {kind} `{name}` refers to unknown {target_kind} `{target}`")]
    UnresolvedReference {
        at: Provenance,
        kind: &'static str,
        name: String,
        target_kind: &'static str,
        target: String,
    },
}

/// One input file: a display name and its text.
#[derive(Clone, Debug)]
pub struct SourceFile {
    pub name: String,
    pub text: String,
}

impl SourceFile {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            text: text.into(),
        }
    }

    pub fn read(path: &Path) -> Result<Self, InputError> {
        let name = path.display().to_string();
        std::fs::read_to_string(path)
            .map(|text| Self {
                name: name.clone(),
                text,
            })
            .map_err(|e| InputError::Io {
                file: name,
                message: e.to_string(),
            })
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    categories: Vec<CategoryDef>,
    #[serde(default)]
    functors: Vec<FunctorDef>,
    #[serde(default)]
    transformations: Vec<TransformationDef>,
    #[serde(default)]
    complexes: Vec<ComplexDef>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDef {
    name: String,
    #[serde(default)]
    objects: Option<Vec<String>>,
    #[serde(default)]
    morphisms: Option<Vec<RawMorphism>>,
    #[serde(default)]
    identities: Option<Vec<(String, String)>>,
    #[serde(default)]
    compose: Option<Vec<(String, String, String)>>,
    #[serde(default)]
    poset: Option<PosetDef>,
    #[serde(default)]
    complex: Option<FacetsDef>,
    #[serde(default)]
    subsets: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetDef {
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<(String, String)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacetsDef {
    facets: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDef {
    name: String,
    complex: FacetsDef,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorDef {
    name: String,
    dom: String,
    cod: String,
    objects: Vec<(String, String)>,
    #[serde(default)]
    morphisms: Vec<(String, String)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformationDef {
    name: String,
    source: String,
    target: String,
    components: Vec<(String, String)>,
}

/// How a category was written down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategorySource {
    Table,
    Poset(Poset),
    /// Face poset of the given complex.
    FacePoset(SimplicialComplex),
}

impl CategorySource {
    pub fn form(&self) -> &'static str {
        match self {
            Self::Table => "table",
            Self::Poset(_) => "poset",
            Self::FacePoset(_) => "face_poset",
        }
    }
}

#[derive(Debug)]
pub struct CategoryItem {
    pub name: String,
    pub provenance: Provenance,
    pub source: CategorySource,
    /// Named object sets, used by `--sub`.
    pub subsets: BTreeMap<String, Vec<String>>,
    expanded: OnceLock<Arc<FiniteCategory>>,
}

impl CategoryItem {
    /// The category, expanding a shorthand on first use.
    pub fn category(&self) -> &Arc<FiniteCategory> {
        self.expanded.get_or_init(|| {
            Arc::new(match &self.source {
                CategorySource::Table => unreachable!("tables are validated on load"),
                CategorySource::Poset(p) => p.to_category(),
                CategorySource::FacePoset(k) => face_poset(k).1,
            })
        })
    }

    pub fn is_expanded(&self) -> bool {
        self.expanded.get().is_some()
    }
}

#[derive(Debug)]
pub struct FunctorItem {
    pub name: String,
    pub provenance: Provenance,
    pub dom: String,
    pub cod: String,
    pub functor: Arc<Functor>,
}

#[derive(Debug)]
pub struct TransformationItem {
    pub name: String,
    pub provenance: Provenance,
    pub source: String,
    pub target: String,
    pub transformation: NaturalTransformation,
}

#[derive(Debug)]
pub struct ComplexItem {
    pub name: String,
    pub provenance: Provenance,
    pub complex: SimplicialComplex,
}

/// Everything loaded from a set of input files, validated.
#[derive(Debug, Default)]
pub struct Workspace {
    pub categories: Vec<CategoryItem>,
    pub functors: Vec<FunctorItem>,
    pub transformations: Vec<TransformationItem>,
    pub complexes: Vec<ComplexItem>,
    category_index: HashMap<String, usize>,
    functor_index: HashMap<String, usize>,
    transformation_index: HashMap<String, usize>,
    complex_index: HashMap<String, usize>,
}

/// Line of the `"name": "<name>"` entry for `name`, searching from the
/// first occurrence of the section key.
fn locate(text: &str, section: &str, name: &str) -> usize {
    let start = text.find(&format!("\"{section}\"")).unwrap_or(0);
    let quoted = serde_json::to_string(name).unwrap_or_default();
    let mut from = start;
    while let Some(off) = text[from..].find(&quoted) {
        let at = from + off;
        let before = text[..at].trim_end();
        if let Some(b) = before.strip_suffix(':') {
            if b.trim_end().ends_with("\"name\"") {
                return text[..at].matches('\n').count() + 1;
            }
        }
        from = at + quoted.len();
    }
    text[..start].matches('\n').count() + 1
}

fn validation(
    at: &Provenance,
    kind: &'static str,
    name: &str,
    message: impl fmt::Display,
) -> InputError {
    InputError::Validation {
        at: at.clone(),
        kind,
        name: name.to_string(),
        message: message.to_string(),
    }
}

fn unresolved(
    at: &Provenance,
    kind: &'static str,
    name: &str,
    target_kind: &'static str,
    target: &str,
) -> InputError {
    InputError::UnresolvedReference {
        at: at.clone(),
        kind,
        name: name.to_string(),
        target_kind,
        target: target.to_string(),
    }
}

fn register(
    index: &mut HashMap<String, usize>,
    seen: &[Provenance],
    kind: &'static str,
    name: &str,
    at: &Provenance,
) -> Result<(), InputError> {
    if let Some(&i) = index.get(name) {
        return Err(validation(
            at,
            kind,
            name,
            format!("name already defined at {}", seen[i]),
        ));
    }
    index.insert(name.to_string(), seen.len());
    Ok(())
}

fn category_item(def: CategoryDef, at: Provenance) -> Result<CategoryItem, InputError> {
    let name = def.name.clone();
    let table = def.objects.is_some()
        || def.morphisms.is_some()
        || def.compose.is_some()
        || def.identities.is_some();
    let forms = [table, def.poset.is_some(), def.complex.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if forms != 1 {
        return Err(validation(
            &at,
            "category",
            &name,
            "exactly one of a table, `poset` or `complex` is required",
        ));
    }
    let expanded = OnceLock::new();
    let source = if let Some(p) = def.poset {
        CategorySource::Poset(
            Poset::from_relations(&p.elements, &p.leq)
                .map_err(|e| validation(&at, "category", &name, e))?,
        )
    } else if let Some(k) = def.complex {
        CategorySource::FacePoset(
            SimplicialComplex::new(&k.facets).map_err(|e| validation(&at, "category", &name, e))?,
        )
    } else {
        let raw = RawCategory {
            objects: def.objects.unwrap_or_default(),
            morphisms: def.morphisms.unwrap_or_default(),
            identities: def.identities.unwrap_or_default(),
            compose: def.compose.unwrap_or_default(),
        };
        let c = validate_category(&raw).map_err(|e| validation(&at, "category", &name, e))?;
        let _ = expanded.set(Arc::new(c));
        CategorySource::Table
    };
    Ok(CategoryItem {
        name,
        provenance: at,
        source,
        subsets: def.subsets,
        expanded,
    })
}

/// Parses and validates a set of files. Names are unique per kind across
/// all files, and references may point into other files.
pub fn parse_workspace(files: &[SourceFile]) -> Result<Workspace, InputError> {
    let mut ws = Workspace::default();
    let mut pending_functors = Vec::new();
    let mut pending_transformations = Vec::new();
    for file in files {
        let doc: Document = serde_json::from_str(&file.text).map_err(|e| InputError::Syntax {
            file: file.name.clone(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let at = |section: &str, name: &str| Provenance {
            file: file.name.clone(),
            line: locate(&file.text, section, name),
        };
        for def in doc.categories {
            let p = at("categories", &def.name);
            let seen: Vec<Provenance> =
                ws.categories.iter().map(|c| c.provenance.clone()).collect();
            register(&mut ws.category_index, &seen, "category", &def.name, &p)?;
            let name = def.name.clone();
            let item = category_item(def, p.clone())?;
            for (sub, objs) in &item.subsets {
                let known = |o: &String| match &item.source {
                    CategorySource::Poset(poset) => poset.elements().contains(o),
                    _ => item.category().obj(o).is_some(),
                };
                if let Some(o) = objs.iter().find(|o| !known(o)) {
                    return Err(validation(
                        &p,
                        "category",
                        &name,
                        format!("subset `{sub}` names unknown object `{o}`"),
                    ));
                }
            }
            ws.categories.push(item);
        }
        for def in doc.complexes {
            let p = at("complexes", &def.name);
            let seen: Vec<Provenance> = ws.complexes.iter().map(|c| c.provenance.clone()).collect();
            register(&mut ws.complex_index, &seen, "complex", &def.name, &p)?;
            let complex = SimplicialComplex::new(&def.complex.facets)
                .map_err(|e| validation(&p, "complex", &def.name, e))?;
            ws.complexes.push(ComplexItem {
                name: def.name,
                provenance: p,
                complex,
            });
        }
        for def in doc.functors {
            let p = at("functors", &def.name);
            pending_functors.push((def, p));
        }
        for def in doc.transformations {
            let p = at("transformations", &def.name);
            pending_transformations.push((def, p));
        }
    }
    for (def, p) in pending_functors {
        let seen: Vec<Provenance> = ws.functors.iter().map(|c| c.provenance.clone()).collect();
        register(&mut ws.functor_index, &seen, "functor", &def.name, &p)?;
        let lookup = |target: &str| {
            ws.category(target)
                .map(|c| c.category().clone())
                .ok_or_else(|| unresolved(&p, "functor", &def.name, "category", target))
        };
        let (dom, cod) = (lookup(&def.dom)?, lookup(&def.cod)?);
        let functor = Functor::from_ids(dom, cod, &def.objects, &def.morphisms)
            .map_err(|e| validation(&p, "functor", &def.name, e))?;
        ws.functors.push(FunctorItem {
            name: def.name,
            provenance: p,
            dom: def.dom,
            cod: def.cod,
            functor: Arc::new(functor),
        });
    }
    for (def, p) in pending_transformations {
        let seen: Vec<Provenance> = ws
            .transformations
            .iter()
            .map(|c| c.provenance.clone())
            .collect();
        register(
            &mut ws.transformation_index,
            &seen,
            "transformation",
            &def.name,
            &p,
        )?;
        let lookup = |target: &str| {
            ws.functor(target)
                .map(|f| f.functor.clone())
                .ok_or_else(|| unresolved(&p, "transformation", &def.name, "functor", target))
        };
        let (s, t) = (lookup(&def.source)?, lookup(&def.target)?);
        // Naturality is a property to report on, not a load-time requirement.
        let transformation = NaturalTransformation::from_ids(s, t, &def.components)
            .map_err(|e| validation(&p, "transformation", &def.name, e))?;
        ws.transformations.push(TransformationItem {
            name: def.name,
            provenance: p,
            source: def.source,
            target: def.target,
            transformation,
        });
    }
    Ok(ws)
}

fn raw_table(c: &FiniteCategory) -> Value {
    let raw = c.to_raw();
    let mut v = json!({
        "objects": raw.objects,
        "morphisms": raw.morphisms,
        "compose": raw.compose,
    });
    if !raw.identities.is_empty() {
        v["identities"] = json!(raw.identities);
    }
    v
}

/// A category entry in the input format, as an explicit table.
pub fn category_to_json(name: &str, c: &FiniteCategory) -> Value {
    let mut v = raw_table(c);
    v["name"] = json!(name);
    v
}

/// A functor entry listing every object and non-identity morphism image.
pub fn functor_to_json(name: &str, dom: &str, cod: &str, f: &Functor) -> Value {
    let (d, c) = (f.dom(), f.cod());
    let objects: Vec<(&str, &str)> = d
        .object_indices()
        .map(|o| (d.obj_id(o), c.obj_id(f.on_obj(o))))
        .collect();
    let morphisms: Vec<(&str, &str)> = d
        .non_identities()
        .map(|m| (d.mor_id(m), c.mor_id(f.on_mor(m))))
        .collect();
    json!({"name": name, "dom": dom, "cod": cod, "objects": objects, "morphisms": morphisms})
}

pub fn transformation_to_json(
    name: &str,
    source: &str,
    target: &str,
    t: &NaturalTransformation,
) -> Value {
    let d = t.source().dom();
    let c = t.source().cod();
    let components: Vec<(&str, &str)> = d
        .object_indices()
        .map(|o| (d.obj_id(o), c.mor_id(t.component(o))))
        .collect();
    json!({"name": name, "source": source, "target": target, "components": components})
}

fn facets_json(k: &SimplicialComplex) -> Value {
    json!({ "facets": k.facet_names() })
}

impl Workspace {
    pub fn category(&self, name: &str) -> Option<&CategoryItem> {
        self.category_index.get(name).map(|&i| &self.categories[i])
    }

    pub fn functor(&self, name: &str) -> Option<&FunctorItem> {
        self.functor_index.get(name).map(|&i| &self.functors[i])
    }

    pub fn transformation(&self, name: &str) -> Option<&TransformationItem> {
        self.transformation_index
            .get(name)
            .map(|&i| &self.transformations[i])
    }

    pub fn complex(&self, name: &str) -> Option<&ComplexItem> {
        self.complex_index.get(name).map(|&i| &self.complexes[i])
    }

    /// One input document holding every item. Shorthands stay shorthands;
    /// posets are written with their covering relations.
    pub fn to_json(&self) -> Value {
        let categories: Vec<Value> = self
            .categories
            .iter()
            .map(|item| {
                let mut v = match &item.source {
                    CategorySource::Table => category_to_json(&item.name, item.category()),
                    CategorySource::Poset(p) => {
                        let el = p.elements();
                        let leq: Vec<(&str, &str)> = p
                            .covers()
                            .into_iter()
                            .map(|(a, b)| (el[a].as_str(), el[b].as_str()))
                            .collect();
                        json!({"name": item.name, "poset": {"elements": el, "leq": leq}})
                    }
                    CategorySource::FacePoset(k) => {
                        json!({"name": item.name, "complex": facets_json(k)})
                    }
                };
                if !item.subsets.is_empty() {
                    v["subsets"] = json!(item.subsets);
                }
                v
            })
            .collect();
        let functors: Vec<Value> = self
            .functors
            .iter()
            .map(|f| functor_to_json(&f.name, &f.dom, &f.cod, &f.functor))
            .collect();
        let transformations: Vec<Value> = self
            .transformations
            .iter()
            .map(|t| transformation_to_json(&t.name, &t.source, &t.target, &t.transformation))
            .collect();
        let complexes: Vec<Value> = self
            .complexes
            .iter()
            .map(|k| json!({"name": k.name, "complex": facets_json(&k.complex)}))
            .collect();
        let mut doc = serde_json::Map::new();
        for (key, items) in [
            ("categories", categories),
            ("functors", functors),
            ("transformations", transformations),
            ("complexes", complexes),
        ] {
            if !items.is_empty() {
                doc.insert(key.to_string(), Value::Array(items));
            }
        }
        Value::Object(doc)
    }

    /// Validated content without provenance, for comparing workspaces.
    pub fn same_content(&self, other: &Workspace) -> bool {
        fn same<T>(a: &[T], b: &[T], eq: impl Fn(&T, &T) -> bool) -> bool {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| eq(x, y))
        }
        same(&self.categories, &other.categories, |a, b| {
            a.name == b.name && a.subsets == b.subsets && a.category() == b.category()
        }) && same(&self.functors, &other.functors, |a, b| {
            (&a.name, &a.dom, &a.cod, &a.functor) == (&b.name, &b.dom, &b.cod, &b.functor)
        }) && same(&self.transformations, &other.transformations, |a, b| {
            (&a.name, &a.source, &a.target, &a.transformation)
                == (&b.name, &b.source, &b.target, &b.transformation)
        }) && same(&self.complexes, &other.complexes, |a, b| {
            a.name == b.name && a.complex == b.complex
        })
    }
}
