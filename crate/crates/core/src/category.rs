//! Finite categories given by an explicit composition table.
//!
//! Objects and morphisms carry opaque string ids. After validation both are
//! stored in lexicographic id order, so every search that walks [`Obj`] or
//! [`Mor`] indices in increasing order is deterministic and independent of
//! the order the input listed them in.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an object in a [`FiniteCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub usize);

/// Index of a morphism in a [`FiniteCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub src: Obj,
    pub tgt: Obj,
}

/// A morphism as written in an input description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

impl RawMorphism {
    pub fn new(id: impl Into<String>, src: impl Into<String>, tgt: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            src: src.into(),
            tgt: tgt.into(),
        }
    }
}

/// Unvalidated category description.
///
/// Identities default to `1_<object>`; they are added when missing from
/// `morphisms`. An entry in `identities` overrides the default name.
/// Composites involving an identity may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: Vec<(String, String)>,
    /// `(g, f, g∘f)` triples.
    pub compose: Vec<(String, String, String)>,
}

impl RawCategory {
    pub fn object(&mut self, id: impl Into<String>) -> &mut Self {
        self.objects.push(id.into());
        self
    }

    pub fn morphism(
        &mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
    ) -> &mut Self {
        self.morphisms.push(RawMorphism::new(id, src, tgt));
        self
    }

    pub fn composite(
        &mut self,
        g: impl Into<String>,
        f: impl Into<String>,
        gf: impl Into<String>,
    ) -> &mut Self {
        self.compose.push((g.into(), f.into(), gf.into()));
        self
    }
}

pub fn identity_name(object: &str) -> String {
    format!("1_{object}")
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate object id `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism id `{0}`")]
    DuplicateMorphism(String),
    #[error("dangling reference to {kind} `{id}`")]
    DanglingReference { kind: &'static str, id: String },
    #[error("identity `{morphism}` of `{object}` is declared with the wrong endpoints")]
    IdentityMismatch { object: String, morphism: String },
    #[error("`{g}` and `{f}` are not composable")]
    NotComposable { g: String, f: String },
    #[error("composite `{g}`∘`{f}` = `{gf}` has the wrong source or target")]
    WrongComposite { g: String, f: String, gf: String },
    #[error("composite `{g}`∘`{f}` given twice: `{first}` and `{second}`")]
    ConflictingComposite {
        g: String,
        f: String,
        first: String,
        second: String,
    },
    #[error("missing composite for the pair (`{g}`, `{f}`)")]
    MissingComposite { g: String, f: String },
    #[error("identity law fails for `{identity}` and `{morphism}`")]
    BrokenIdentity { identity: String, morphism: String },
    #[error("associativity fails for (`{h}`, `{g}`, `{f}`)")]
    BrokenAssociativity { h: String, g: String, f: String },
}

/// A validated finite category.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<Mor>,
    is_identity: Vec<bool>,
    out_of: Vec<Vec<Mor>>,
    into: Vec<Vec<Mor>>,
    hom: Vec<Vec<Vec<Mor>>>,
    /// Position of `f` within `into[tgt f]`.
    slot: Vec<usize>,
    /// `composites[g][slot(f)] = g∘f` for every `f` into `src g`.
    composites: Vec<Vec<Mor>>,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
}

impl PartialEq for FiniteCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.composites == other.composites
    }
}

impl Eq for FiniteCategory {}

pub fn validate_category(raw: &RawCategory) -> Result<FiniteCategory, CategoryError> {
    let mut objects = raw.objects.clone();
    objects.sort();
    if let Some(w) = objects.windows(2).find(|w| w[0] == w[1]) {
        return Err(CategoryError::DuplicateObject(w[0].clone()));
    }
    let obj_index: HashMap<String, Obj> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.clone(), Obj(i)))
        .collect();
    let lookup_obj = |id: &str| {
        obj_index
            .get(id)
            .copied()
            .ok_or_else(|| CategoryError::DanglingReference {
                kind: "object",
                id: id.to_string(),
            })
    };

    let mut identity_names: Vec<String> = objects.iter().map(|o| identity_name(o)).collect();
    for (o, m) in &raw.identities {
        identity_names[lookup_obj(o)?.0] = m.clone();
    }

    let mut declared: BTreeMap<String, (Obj, Obj)> = BTreeMap::new();
    for m in &raw.morphisms {
        let (s, t) = (lookup_obj(&m.src)?, lookup_obj(&m.tgt)?);
        if declared.insert(m.id.clone(), (s, t)).is_some() {
            return Err(CategoryError::DuplicateMorphism(m.id.clone()));
        }
    }
    for (i, name) in identity_names.iter().enumerate() {
        match declared.get(name) {
            Some(&(s, t)) if s != Obj(i) || t != Obj(i) => {
                return Err(CategoryError::IdentityMismatch {
                    object: objects[i].clone(),
                    morphism: name.clone(),
                });
            }
            Some(_) => {}
            None => {
                declared.insert(name.clone(), (Obj(i), Obj(i)));
            }
        }
    }
    let morphisms: Vec<Morphism> = declared
        .into_iter()
        .map(|(id, (src, tgt))| Morphism { id, src, tgt })
        .collect();
    let mor_index: HashMap<String, Mor> = morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| (m.id.clone(), Mor(i)))
        .collect();
    let identities: Vec<Mor> = identity_names.iter().map(|n| mor_index[n]).collect();
    {
        let mut sorted = identities.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(CategoryError::DuplicateMorphism(
                morphisms[w[0].0].id.clone(),
            ));
        }
    }
    let lookup_mor = |id: &str| {
        mor_index
            .get(id)
            .copied()
            .ok_or_else(|| CategoryError::DanglingReference {
                kind: "morphism",
                id: id.to_string(),
            })
    };

    let mut table: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for (g, f, gf) in &raw.compose {
        let (gi, fi, gfi) = (lookup_mor(g)?, lookup_mor(f)?, lookup_mor(gf)?);
        let (mg, mf, mgf) = (&morphisms[gi.0], &morphisms[fi.0], &morphisms[gfi.0]);
        if mg.src != mf.tgt {
            return Err(CategoryError::NotComposable {
                g: g.clone(),
                f: f.clone(),
            });
        }
        if mgf.src != mf.src || mgf.tgt != mg.tgt {
            return Err(CategoryError::WrongComposite {
                g: g.clone(),
                f: f.clone(),
                gf: gf.clone(),
            });
        }
        if let Some(prev) = table.insert((gi, fi), gfi) {
            if prev != gfi {
                return Err(CategoryError::ConflictingComposite {
                    g: g.clone(),
                    f: f.clone(),
                    first: morphisms[prev.0].id.clone(),
                    second: gf.clone(),
                });
            }
        }
    }
    for (i, m) in morphisms.iter().enumerate() {
        let f = Mor(i);
        for (key, idm) in [
            ((identities[m.tgt.0], f), identities[m.tgt.0]),
            ((f, identities[m.src.0]), identities[m.src.0]),
        ] {
            match table.get(&key) {
                Some(&h) if h != f => {
                    return Err(CategoryError::BrokenIdentity {
                        identity: morphisms[idm.0].id.clone(),
                        morphism: m.id.clone(),
                    });
                }
                Some(_) => {}
                None => {
                    table.insert(key, f);
                }
            }
        }
    }

    let n = objects.len();
    let mut out_of = vec![Vec::new(); n];
    let mut into = vec![Vec::new(); n];
    let mut hom = vec![vec![Vec::new(); n]; n];
    let mut slot = vec![0; morphisms.len()];
    for (i, m) in morphisms.iter().enumerate() {
        out_of[m.src.0].push(Mor(i));
        slot[i] = into[m.tgt.0].len();
        into[m.tgt.0].push(Mor(i));
        hom[m.src.0][m.tgt.0].push(Mor(i));
    }
    let mut composites = Vec::with_capacity(morphisms.len());
    for (gi, g) in morphisms.iter().enumerate() {
        let mut row = Vec::with_capacity(into[g.src.0].len());
        for &f in &into[g.src.0] {
            match table.get(&(Mor(gi), f)) {
                Some(&h) => row.push(h),
                None => {
                    return Err(CategoryError::MissingComposite {
                        g: g.id.clone(),
                        f: morphisms[f.0].id.clone(),
                    })
                }
            }
        }
        composites.push(row);
    }
    let is_identity = {
        let mut v = vec![false; morphisms.len()];
        for m in &identities {
            v[m.0] = true;
        }
        v
    };

    let cat = FiniteCategory {
        objects,
        morphisms,
        identities,
        is_identity,
        out_of,
        into,
        hom,
        slot,
        composites,
        obj_index,
        mor_index,
    };
    cat.check_associativity()?;
    Ok(cat)
}

impl FiniteCategory {
    fn check_associativity(&self) -> Result<(), CategoryError> {
        for f in self.morphism_indices() {
            for &g in self.out_of(self.tgt(f)) {
                let gf = self.compose_unchecked(g, f);
                for &h in self.out_of(self.tgt(g)) {
                    let left = self.compose_unchecked(h, gf);
                    let right = self.compose_unchecked(self.compose_unchecked(h, g), f);
                    if left != right {
                        return Err(CategoryError::BrokenAssociativity {
                            h: self.mor_id(h).to_string(),
                            g: self.mor_id(g).to_string(),
                            f: self.mor_id(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object_indices(&self) -> impl Iterator<Item = Obj> + '_ {
        (0..self.objects.len()).map(Obj)
    }

    pub fn morphism_indices(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn non_identities(&self) -> impl Iterator<Item = Mor> + '_ {
        self.morphism_indices().filter(|&m| !self.is_identity(m))
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn obj(&self, id: &str) -> Option<Obj> {
        self.obj_index.get(id).copied()
    }

    pub fn mor(&self, id: &str) -> Option<Mor> {
        self.mor_index.get(id).copied()
    }

    pub fn obj_id(&self, o: Obj) -> &str {
        &self.objects[o.0]
    }

    pub fn mor_id(&self, m: Mor) -> &str {
        &self.morphisms[m.0].id
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.morphisms[m.0].src
    }

    pub fn tgt(&self, m: Mor) -> Obj {
        self.morphisms[m.0].tgt
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.identities[o.0]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.is_identity[m.0]
    }

    pub fn out_of(&self, o: Obj) -> &[Mor] {
        &self.out_of[o.0]
    }

    pub fn incoming(&self, o: Obj) -> &[Mor] {
        &self.into[o.0]
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        &self.hom[a.0][b.0]
    }

    /// `g∘f`, or `None` when `src g != tgt f`.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.src(g) == self.tgt(f)).then(|| self.compose_unchecked(g, f))
    }

    /// `g∘f` for a pair known to be composable.
    pub fn compose_unchecked(&self, g: Mor, f: Mor) -> Mor {
        debug_assert_eq!(self.src(g), self.tgt(f));
        self.composites[g.0][self.slot[f.0]]
    }

    /// Composite of a path listed in application order (`path[0]` first).
    pub fn compose_path(&self, path: &[Mor]) -> Option<Mor> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &m| self.compose(m, acc))
    }

    /// Two-sided inverse of `m`, if it is an isomorphism.
    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        let (s, t) = (self.src(m), self.tgt(m));
        self.hom(t, s).iter().copied().find(|&n| {
            self.compose_unchecked(n, m) == self.identity(s)
                && self.compose_unchecked(m, n) == self.identity(t)
        })
    }

    /// Connected components of the underlying undirected graph, each sorted;
    /// components are ordered by their smallest object.
    pub fn components(&self) -> Vec<Vec<Obj>> {
        let n = self.num_objects();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![Obj(start)];
            comp[start] = c;
            let mut i = 0;
            while i < members.len() {
                let o = members[i];
                i += 1;
                let nbrs = self.out_of(o).iter().map(|&m| self.tgt(m));
                let nbrs: Vec<Obj> = nbrs
                    .chain(self.incoming(o).iter().map(|&m| self.src(m)))
                    .collect();
                for p in nbrs {
                    if comp[p.0] == usize::MAX {
                        comp[p.0] = c;
                        members.push(p);
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    /// Back to an input description: non-identity morphisms and their
    /// composites only. Identities keep their names when they differ from
    /// the `1_<object>` default.
    pub fn to_raw(&self) -> RawCategory {
        let mut raw = RawCategory {
            objects: self.objects.clone(),
            ..Default::default()
        };
        for (i, o) in self.objects.iter().enumerate() {
            let idm = self.mor_id(self.identities[i]);
            if idm != identity_name(o) {
                raw.identities.push((o.clone(), idm.to_string()));
            }
        }
        for f in self.non_identities() {
            let m = &self.morphisms[f.0];
            raw.morphisms.push(RawMorphism::new(
                &m.id,
                self.obj_id(m.src),
                self.obj_id(m.tgt),
            ));
        }
        for f in self.non_identities() {
            for &g in self.out_of(self.tgt(f)) {
                if self.is_identity(g) {
                    continue;
                }
                let gf = self.compose_unchecked(g, f);
                raw.compose.push((
                    self.mor_id(g).to_string(),
                    self.mor_id(f).to_string(),
                    self.mor_id(gf).to_string(),
                ));
            }
        }
        raw
    }

    /// Same category with every id passed through the given renamings.
    pub fn renamed(
        &self,
        objects: impl Fn(&str) -> String,
        morphisms: impl Fn(&str) -> String,
    ) -> Result<FiniteCategory, CategoryError> {
        let raw = self.to_raw();
        let mut out = RawCategory {
            objects: raw.objects.iter().map(|o| objects(o)).collect(),
            ..RawCategory::default()
        };
        out.identities = self
            .object_indices()
            .map(|o| {
                (
                    objects(self.obj_id(o)),
                    morphisms(self.mor_id(self.identity(o))),
                )
            })
            .collect();
        out.morphisms = raw
            .morphisms
            .iter()
            .map(|m| RawMorphism::new(morphisms(&m.id), objects(&m.src), objects(&m.tgt)))
            .collect();
        out.compose = raw
            .compose
            .iter()
            .map(|(g, f, gf)| (morphisms(g), morphisms(f), morphisms(gf)))
            .collect();
        validate_category(&out)
    }
}

impl fmt::Display for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "category with {} objects and {} morphisms",
            self.num_objects(),
            self.num_morphisms()
        )
    }
}
