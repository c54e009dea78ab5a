//! Functors and natural transformations between finite categories.

use std::sync::Arc;

use thiserror::Error;

use crate::category::{FiniteCategory, Mor, Obj};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("dangling reference to {kind} `{id}`")]
    DanglingReference { kind: &'static str, id: String },
    #[error("no image given for {kind} `{id}`")]
    MissingImage { kind: &'static str, id: String },
    #[error("image of `{morphism}` has the wrong source or target")]
    BrokenEndpoints { morphism: String },
    #[error("identity of `{object}` is not sent to an identity")]
    BrokenIdentity { object: String },
    #[error("composition not preserved for (`{g}`, `{f}`)")]
    BrokenComposition { g: String, f: String },
    #[error("component at `{object}` is not a morphism {expected}")]
    BadComponent { object: String, expected: String },
    #[error("naturality fails at `{morphism}`")]
    NaturalityFailure { morphism: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// A map of finite categories. Constructed through [`Functor::new`] it is
/// guaranteed to preserve endpoints, identities and composition;
/// [`Functor::unchecked`] skips those checks so that
/// [`Functor::find_violation`] can report on arbitrary maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    dom: Arc<FiniteCategory>,
    cod: Arc<FiniteCategory>,
    on_objects: Vec<Obj>,
    on_morphisms: Vec<Mor>,
}

impl Functor {
    pub fn unchecked(
        dom: Arc<FiniteCategory>,
        cod: Arc<FiniteCategory>,
        on_objects: Vec<Obj>,
        on_morphisms: Vec<Mor>,
    ) -> Self {
        assert_eq!(on_objects.len(), dom.num_objects());
        assert_eq!(on_morphisms.len(), dom.num_morphisms());
        Self {
            dom,
            cod,
            on_objects,
            on_morphisms,
        }
    }

    pub fn new(
        dom: Arc<FiniteCategory>,
        cod: Arc<FiniteCategory>,
        on_objects: Vec<Obj>,
        on_morphisms: Vec<Mor>,
    ) -> Result<Self, FunctorError> {
        let f = Self::unchecked(dom, cod, on_objects, on_morphisms);
        match f.find_violation() {
            Some(e) => Err(e),
            None => Ok(f),
        }
    }

    /// Builds a functor from id pairs. Identity morphisms whose image is not
    /// listed are sent to the identity of the image object.
    pub fn from_ids(
        dom: Arc<FiniteCategory>,
        cod: Arc<FiniteCategory>,
        objects: &[(String, String)],
        morphisms: &[(String, String)],
    ) -> Result<Self, FunctorError> {
        let f = Self::unchecked_from_ids(dom, cod, objects, morphisms)?;
        match f.find_violation() {
            Some(e) => Err(e),
            None => Ok(f),
        }
    }

    pub fn unchecked_from_ids(
        dom: Arc<FiniteCategory>,
        cod: Arc<FiniteCategory>,
        objects: &[(String, String)],
        morphisms: &[(String, String)],
    ) -> Result<Self, FunctorError> {
        let dangling = |kind, id: &str| FunctorError::DanglingReference {
            kind,
            id: id.to_string(),
        };
        let mut on_objects = vec![None; dom.num_objects()];
        for (a, b) in objects {
            let a = dom.obj(a).ok_or_else(|| dangling("object", a))?;
            on_objects[a.0] = Some(cod.obj(b).ok_or_else(|| dangling("object", b))?);
        }
        let on_objects: Vec<Obj> = on_objects
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| FunctorError::MissingImage {
                    kind: "object",
                    id: dom.obj_id(Obj(i)).to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        let mut on_morphisms = vec![None; dom.num_morphisms()];
        for (a, b) in morphisms {
            let a = dom.mor(a).ok_or_else(|| dangling("morphism", a))?;
            on_morphisms[a.0] = Some(cod.mor(b).ok_or_else(|| dangling("morphism", b))?);
        }
        let on_morphisms: Vec<Mor> = on_morphisms
            .into_iter()
            .enumerate()
            .map(|(i, m)| match m {
                Some(m) => Ok(m),
                None if dom.is_identity(Mor(i)) => Ok(cod.identity(on_objects[dom.src(Mor(i)).0])),
                None => Err(FunctorError::MissingImage {
                    kind: "morphism",
                    id: dom.mor_id(Mor(i)).to_string(),
                }),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self::unchecked(dom, cod, on_objects, on_morphisms))
    }

    pub fn identity(c: Arc<FiniteCategory>) -> Self {
        let objs = c.object_indices().collect();
        let mors = c.morphism_indices().collect();
        Self::unchecked(c.clone(), c, objs, mors)
    }

    /// The functor sending everything to `target` and its identity.
    pub fn constant(dom: Arc<FiniteCategory>, cod: Arc<FiniteCategory>, target: Obj) -> Self {
        let objs = vec![target; dom.num_objects()];
        let mors = vec![cod.identity(target); dom.num_morphisms()];
        Self::unchecked(dom, cod, objs, mors)
    }

    pub fn dom(&self) -> &Arc<FiniteCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteCategory> {
        &self.cod
    }

    pub fn on_obj(&self, o: Obj) -> Obj {
        self.on_objects[o.0]
    }

    pub fn on_mor(&self, m: Mor) -> Mor {
        self.on_morphisms[m.0]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.on_objects
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.on_morphisms
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Result<Functor, FunctorError> {
        if *self.cod != *other.dom {
            return Err(FunctorError::ShapeMismatch(
                "codomain does not match domain".into(),
            ));
        }
        let objs = self.on_objects.iter().map(|&o| other.on_obj(o)).collect();
        let mors = self.on_morphisms.iter().map(|&m| other.on_mor(m)).collect();
        Ok(Functor::unchecked(
            self.dom.clone(),
            other.cod.clone(),
            objs,
            mors,
        ))
    }

    /// First law violation in deterministic order, if any.
    pub fn find_violation(&self) -> Option<FunctorError> {
        let (d, c) = (&*self.dom, &*self.cod);
        for m in d.morphism_indices() {
            let fm = self.on_mor(m);
            if c.src(fm) != self.on_obj(d.src(m)) || c.tgt(fm) != self.on_obj(d.tgt(m)) {
                return Some(FunctorError::BrokenEndpoints {
                    morphism: d.mor_id(m).to_string(),
                });
            }
        }
        for o in d.object_indices() {
            if self.on_mor(d.identity(o)) != c.identity(self.on_obj(o)) {
                return Some(FunctorError::BrokenIdentity {
                    object: d.obj_id(o).to_string(),
                });
            }
        }
        for f in d.morphism_indices() {
            for &g in d.out_of(d.tgt(f)) {
                let lhs = self.on_mor(d.compose_unchecked(g, f));
                if c.compose(self.on_mor(g), self.on_mor(f)) != Some(lhs) {
                    return Some(FunctorError::BrokenComposition {
                        g: d.mor_id(g).to_string(),
                        f: d.mor_id(f).to_string(),
                    });
                }
            }
        }
        None
    }

    /// The same functor between opposite categories.
    pub fn opposite(&self) -> Functor {
        let dom = Arc::new(crate::derive::opposite(&self.dom));
        let cod = Arc::new(crate::derive::opposite(&self.cod));
        // Opposites keep every id, so indices line up.
        Functor::unchecked(dom, cod, self.on_objects.clone(), self.on_morphisms.clone())
    }
}

/// A family of components `source(X) → target(X)` in the codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalTransformation {
    source: Arc<Functor>,
    target: Arc<Functor>,
    components: Vec<Mor>,
}

/// A naturality square that fails to commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrokenSquare {
    pub morphism: Mor,
    /// `target(f) ∘ α_X`
    pub left: Mor,
    /// `α_Y ∘ source(f)`
    pub right: Mor,
}

impl NaturalTransformation {
    /// Checks component endpoints only; see [`Self::broken_square`].
    pub fn new(
        source: Arc<Functor>,
        target: Arc<Functor>,
        components: Vec<Mor>,
    ) -> Result<Self, FunctorError> {
        if source.dom() != target.dom() || source.cod() != target.cod() {
            return Err(FunctorError::ShapeMismatch(
                "source and target functors have different domain or codomain".into(),
            ));
        }
        let (d, c) = (source.dom(), source.cod());
        if components.len() != d.num_objects() {
            return Err(FunctorError::ShapeMismatch(
                "one component per object required".into(),
            ));
        }
        for o in d.object_indices() {
            let a = components[o.0];
            if c.src(a) != source.on_obj(o) || c.tgt(a) != target.on_obj(o) {
                return Err(FunctorError::BadComponent {
                    object: d.obj_id(o).to_string(),
                    expected: format!(
                        "{} → {}",
                        c.obj_id(source.on_obj(o)),
                        c.obj_id(target.on_obj(o))
                    ),
                });
            }
        }
        Ok(Self {
            source,
            target,
            components,
        })
    }

    pub fn from_ids(
        source: Arc<Functor>,
        target: Arc<Functor>,
        components: &[(String, String)],
    ) -> Result<Self, FunctorError> {
        let (d, c) = (source.dom().clone(), source.cod().clone());
        let mut comps = vec![None; d.num_objects()];
        for (o, m) in components {
            let oi = d.obj(o).ok_or_else(|| FunctorError::DanglingReference {
                kind: "object",
                id: o.clone(),
            })?;
            let mi = c.mor(m).ok_or_else(|| FunctorError::DanglingReference {
                kind: "morphism",
                id: m.clone(),
            })?;
            comps[oi.0] = Some(mi);
        }
        let comps = comps
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| FunctorError::MissingImage {
                    kind: "component",
                    id: d.obj_id(Obj(i)).to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Self::new(source, target, comps)
    }

    pub fn source(&self) -> &Arc<Functor> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Functor> {
        &self.target
    }

    pub fn component(&self, o: Obj) -> Mor {
        self.components[o.0]
    }

    pub fn components(&self) -> &[Mor] {
        &self.components
    }

    /// First non-commuting square, walking morphisms of the domain in order.
    pub fn broken_square(&self) -> Option<BrokenSquare> {
        let (d, c) = (self.source.dom(), self.source.cod());
        d.morphism_indices().find_map(|f| {
            let left = c.compose_unchecked(self.target.on_mor(f), self.components[d.src(f).0]);
            let right = c.compose_unchecked(self.components[d.tgt(f).0], self.source.on_mor(f));
            (left != right).then_some(BrokenSquare {
                morphism: f,
                left,
                right,
            })
        })
    }

    pub fn is_natural(&self) -> bool {
        self.broken_square().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn identity_functor_is_valid() {
        let c = Arc::new(zoo::symmetric_group(3));
        assert!(Functor::identity(c).find_violation().is_none());
    }

    #[test]
    fn composition_violation_reported() {
        // Z/2 → Z/2 sending the generator to itself but the identity to the
        // generator breaks the identity law first.
        let c = Arc::new(zoo::cyclic_group(2));
        let t = c.mor("g1").unwrap();
        let f = Functor::unchecked(c.clone(), c.clone(), vec![Obj(0)], vec![t, t]);
        assert!(matches!(
            f.find_violation(),
            Some(FunctorError::BrokenIdentity { .. })
        ));
        // Z/3 → Z/3, g ↦ g, g² ↦ g: composition fails.
        let c3 = Arc::new(zoo::cyclic_group(3));
        let (id, g1) = (c3.mor("1_o").unwrap(), c3.mor("g1").unwrap());
        let mut mors = vec![id; 3];
        mors[g1.0] = g1;
        mors[c3.mor("g2").unwrap().0] = g1;
        let f = Functor::unchecked(c3.clone(), c3, vec![Obj(0)], mors);
        assert_eq!(
            f.find_violation(),
            Some(FunctorError::BrokenComposition {
                g: "g1".into(),
                f: "g1".into()
            })
        );
    }

    #[test]
    fn naturality_of_poset_inequality() {
        let p = Arc::new(zoo::chain(3));
        let id = Arc::new(Functor::identity(p.clone()));
        let top = Arc::new(Functor::constant(p.clone(), p.clone(), p.obj("2").unwrap()));
        let comps: Vec<Mor> = p
            .object_indices()
            .map(|o| p.hom(o, p.obj("2").unwrap())[0])
            .collect();
        let t = NaturalTransformation::new(id, top, comps).unwrap();
        assert!(t.is_natural());
    }
}
