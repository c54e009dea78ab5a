//! Automorphism groups, the Lascar subgroup of automorphisms fixing a map
//! from a small object, the quotient `Gal_L`, and the map `φ` into π₁.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::budget::Budget;
use crate::category::{FiniteCategory, Mor, Obj};
use crate::fibration::monster_report;
use crate::group::word::Word;
use crate::group::{Abelianization, FiniteGroupTable, GroupSummary, Quotient};
use crate::pi1::{pi1_presentation, Pi1Group, Pi1Presentation};
use crate::report::{PropertyReport, Verdict, Witness};

/// `Aut(U)` as a table whose element `i` is the morphism `morphisms[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismGroup {
    pub table: FiniteGroupTable,
    pub morphisms: Vec<Mor>,
}

pub fn automorphism_group(c: &FiniteCategory, u: Obj) -> AutomorphismGroup {
    let morphisms: Vec<Mor> = c
        .hom(u, u)
        .iter()
        .copied()
        .filter(|&a| c.inverse(a).is_some())
        .collect();
    let index = |m: Mor| {
        morphisms
            .binary_search(&m)
            .expect("automorphisms are closed under composition")
    };
    let mult = morphisms
        .iter()
        .map(|&a| {
            morphisms
                .iter()
                .map(|&b| index(c.compose_unchecked(a, b)))
                .collect()
        })
        .collect();
    let names = morphisms.iter().map(|&m| c.mor_id(m).to_string()).collect();
    let table = FiniteGroupTable::new(names, mult).expect("automorphisms form a group");
    AutomorphismGroup { table, morphisms }
}

/// `α` fixes `f: M → U` in the sense `α ∘ f = f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LstGenerator {
    pub element: usize,
    pub object: Obj,
    pub witness: Mor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LascarResult {
    pub aut: AutomorphismGroup,
    pub small: Vec<Obj>,
    pub lst_generators: Vec<LstGenerator>,
    /// Sorted elements of the generated subgroup.
    pub lst: Vec<usize>,
    pub normality_verified: bool,
    /// `(h, g)` with `g h g⁻¹ ∉ Lst`, when normality fails.
    pub normality_witness: Option<(usize, usize)>,
    pub closure_applied: bool,
    pub quotient: Option<Quotient>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LascarError {
    #[error("Lst is not normal: conjugating `{element}` by `{conjugator}` leaves it")]
    NotNormal { element: String, conjugator: String },
    #[error("π₁ did not enumerate: {0}")]
    EnumerationFailed(String),
    #[error("φ is not well defined: `{generator}` maps to `{image}`")]
    WellDefinednessFailure { generator: String, image: String },
}

/// Exhausts `(α, M, f)`; the first witness in (object, morphism) id order
/// is kept for each `α ≠ 1`. Normality is checked by conjugation, and for
/// each generator `α` fixing `f` the conjugate `βαβ⁻¹` is confirmed to fix
/// `β f`.
pub fn lst_subgroup(c: &FiniteCategory, c0: &[Obj], u: Obj) -> LascarResult {
    let aut = automorphism_group(c, u);
    let mut small = c0.to_vec();
    small.sort();
    small.dedup();
    let t = &aut.table;
    let mut gens = Vec::new();
    for (i, &alpha) in aut.morphisms.iter().enumerate() {
        if i == t.identity() {
            continue;
        }
        let found = small.iter().find_map(|&m| {
            c.hom(m, u)
                .iter()
                .find(|&&f| c.compose_unchecked(alpha, f) == f)
                .map(|&f| (m, f))
        });
        if let Some((object, witness)) = found {
            gens.push(LstGenerator {
                element: i,
                object,
                witness,
            });
        }
    }
    let gen_elems: Vec<usize> = gens.iter().map(|g| g.element).collect();
    let lst = t.generated_subgroup(&gen_elems);
    let mut witness = t.normality_witness(&lst);
    if witness.is_none() {
        'check: for g in &gens {
            for (b, &beta) in aut.morphisms.iter().enumerate() {
                let conj = aut.morphisms[t.product([b, g.element, t.inv(b)])];
                let bf = c.compose_unchecked(beta, g.witness);
                if c.compose_unchecked(conj, bf) != bf {
                    witness = Some((g.element, b));
                    break 'check;
                }
            }
        }
    }
    LascarResult {
        aut,
        small,
        lst_generators: gens,
        lst,
        normality_verified: witness.is_none(),
        normality_witness: witness,
        closure_applied: false,
        quotient: None,
    }
}

/// `Gal_L = Aut(U) / Lst`. Without `normal_closure` a non-normal `Lst`
/// is an error; with it the quotient is taken by the normal closure.
pub fn lascar_group(
    c: &FiniteCategory,
    c0: &[Obj],
    u: Obj,
    normal_closure: bool,
) -> Result<LascarResult, LascarError> {
    let mut r = lst_subgroup(c, c0, u);
    if let Some((h, g)) = r.normality_witness {
        if !normal_closure {
            let t = &r.aut.table;
            return Err(LascarError::NotNormal {
                element: t.name(h).into(),
                conjugator: t.name(g).into(),
            });
        }
        r.lst = r.aut.table.normal_closure(&r.lst);
        r.closure_applied = true;
    }
    r.quotient = Some(r.aut.table.quotient(&r.lst));
    Ok(r)
}

impl LascarResult {
    pub fn gal(&self) -> Option<&FiniteGroupTable> {
        self.quotient.as_ref().map(|q| &q.table)
    }

    pub fn lst_order(&self) -> usize {
        self.lst.len()
    }

    pub fn to_json(&self, c: &FiniteCategory) -> serde_json::Value {
        let t = &self.aut.table;
        let gens: Vec<_> = self
            .lst_generators
            .iter()
            .map(|g| {
                json!({
                    "automorphism": t.name(g.element),
                    "object": c.obj_id(g.object),
                    "fixes": c.mor_id(g.witness),
                })
            })
            .collect();
        json!({
            "aut": t.summary(),
            "small_objects": self.small.iter().map(|&m| c.obj_id(m)).collect::<Vec<_>>(),
            "lst_generators": gens,
            "lst_order": self.lst.len(),
            "normality_verified": self.normality_verified,
            "normal_closure_applied": self.closure_applied,
            "gal": self.gal().map(FiniteGroupTable::summary),
            "gal_elements": self.gal().map(|g| g.elements().to_vec()),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiImage {
    pub coset: String,
    pub word: String,
    pub element: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiMap {
    pub images: Vec<PhiImage>,
    /// Every Lst generator maps to the identity.
    pub well_defined: Verdict,
    pub homomorphism: Verdict,
    pub injective: Option<bool>,
    pub surjective: Option<bool>,
    #[serde(skip)]
    pub elements: Vec<Option<usize>>,
    #[serde(skip)]
    pub words: Vec<Word>,
}

impl PhiMap {
    pub fn is_isomorphism(&self) -> bool {
        self.well_defined == Verdict::Holds
            && self.homomorphism == Verdict::Holds
            && self.injective == Some(true)
            && self.surjective == Some(true)
    }
}

/// `[α] ↦ ⟦α⟧`, evaluated in the enumerated π₁ when available.
pub fn phi_map(
    lascar: &LascarResult,
    pres: &Pi1Presentation,
    pi1: &Pi1Group,
) -> Result<PhiMap, LascarError> {
    let q = lascar.quotient.as_ref().expect("phi needs the quotient");
    let aut = &lascar.aut;
    let word_of = |i: usize| {
        pres.loop_word(aut.morphisms[i])
            .expect("U is the basepoint")
    };
    let words: Vec<Word> = q.representatives.iter().map(|&r| word_of(r)).collect();
    let Ok(group) = pi1.group.as_ref() else {
        let images = q
            .representatives
            .iter()
            .zip(&words)
            .map(|(&r, w)| PhiImage {
                coset: q.table.name(q.coset_of[r]).to_string(),
                word: pres.word_string(w),
                element: None,
            })
            .collect();
        return Ok(PhiMap {
            images,
            well_defined: Verdict::Unknown,
            homomorphism: Verdict::Unknown,
            injective: None,
            surjective: None,
            elements: vec![None; words.len()],
            words,
        });
    };
    let eval = |i: usize| pi1.evaluate(&word_of(i)).expect("group enumerated");
    let gt = &group.table;
    for g in &lascar.lst_generators {
        let e = eval(g.element);
        if e != gt.identity() {
            return Err(LascarError::WellDefinednessFailure {
                generator: aut.table.name(g.element).into(),
                image: gt.name(e).into(),
            });
        }
    }
    // Constant on cosets.
    let all: Vec<usize> = (0..aut.table.order()).map(eval).collect();
    let elements: Vec<usize> = q.representatives.iter().map(|&r| all[r]).collect();
    for (a, &e) in all.iter().enumerate() {
        if elements[q.coset_of[a]] != e {
            return Err(LascarError::WellDefinednessFailure {
                generator: aut.table.name(a).into(),
                image: gt.name(gt.mul(e, gt.inv(elements[q.coset_of[a]]))).into(),
            });
        }
    }
    let n = q.table.order();
    let homomorphism = (0..n)
        .all(|a| (0..n).all(|b| elements[q.table.mul(a, b)] == gt.mul(elements[a], elements[b])));
    let mut image = elements.clone();
    image.sort();
    image.dedup();
    let images = q
        .representatives
        .iter()
        .zip(&words)
        .zip(&elements)
        .map(|((&r, w), &e)| PhiImage {
            coset: q.table.name(q.coset_of[r]).to_string(),
            word: pres.word_string(w),
            element: Some(gt.name(e).to_string()),
        })
        .collect();
    Ok(PhiMap {
        images,
        well_defined: Verdict::Holds,
        homomorphism: if homomorphism {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        injective: Some(image.len() == n),
        surjective: Some(image.len() == gt.order()),
        elements: elements.into_iter().map(Some).collect(),
        words,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremVerdict {
    Holds,
    Fails,
    HypothesesNotMet,
    EnumerationFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi1Summary {
    pub generators: usize,
    pub relators: usize,
    pub simplified_generators: usize,
    pub simplified_relators: usize,
    pub abelianization: Abelianization,
    pub order: Option<usize>,
    pub summary: Option<GroupSummary>,
}

impl Pi1Summary {
    pub fn new(p: &Pi1Presentation, g: &Pi1Group) -> Self {
        Self {
            generators: p.presentation.generators.len(),
            relators: p.presentation.relators.len(),
            simplified_generators: g.tietze.presentation.generators.len(),
            simplified_relators: g.tietze.presentation.relators.len(),
            abelianization: g.abelianization.clone(),
            order: g.order(),
            summary: g.group.as_ref().ok().map(|e| e.table.summary()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MainTheoremReport {
    pub verdict: TheoremVerdict,
    pub universal: PropertyReport,
    pub strongly_homogeneous: PropertyReport,
    pub gal: Option<GroupSummary>,
    pub lst_order: Option<usize>,
    pub pi1: Option<Pi1Summary>,
    pub phi: Option<PhiMap>,
    pub isomorphic_tables: Option<bool>,
    pub witness: Option<Witness>,
}

/// Checks the hypotheses, then computes `Gal_L` from automorphisms and π₁
/// from the nerve, and holds iff `φ` is a bijective homomorphism. Both
/// groups are reported whatever the outcome.
pub fn verify_main_theorem(
    c: &Arc<FiniteCategory>,
    c0: &[Obj],
    u: Obj,
    max_cosets: usize,
    budget: &Budget,
) -> MainTheoremReport {
    let (universal, strongly_homogeneous) = monster_report(c, c0, u);
    let hypotheses = universal.is_holds() && strongly_homogeneous.is_holds();
    let mut report = MainTheoremReport {
        verdict: TheoremVerdict::Holds,
        witness: None,
        universal,
        strongly_homogeneous,
        gal: None,
        lst_order: None,
        pi1: None,
        phi: None,
        isomorphic_tables: None,
    };
    if !hypotheses {
        report.verdict = TheoremVerdict::HypothesesNotMet;
        report.witness = [&report.universal, &report.strongly_homogeneous]
            .into_iter()
            .find(|r| r.is_fails())
            .and_then(|r| r.witness.clone());
    }
    let lascar = match lascar_group(c, c0, u, false) {
        Ok(l) => Some(l),
        Err(e) => {
            if hypotheses {
                report.verdict = TheoremVerdict::Fails;
                report.witness = Some(Witness::new("lascar_error").with("error", e.to_string()));
            }
            None
        }
    };
    if let Some(l) = &lascar {
        report.gal = l.gal().map(FiniteGroupTable::summary);
        report.lst_order = Some(l.lst_order());
    }
    let pres = pi1_presentation(c, u);
    let pi1 = match pres.identify(max_cosets, budget) {
        Ok(g) => g,
        Err(e) => {
            if hypotheses {
                report.verdict = TheoremVerdict::EnumerationFailed;
                report.witness = Some(
                    Witness::new("resource_limit")
                        .with("what", e.what.clone())
                        .with("limit", e.limit),
                );
            }
            return report;
        }
    };
    report.pi1 = Some(Pi1Summary::new(&pres, &pi1));
    let Some(l) = lascar else { return report };
    if let (Some(gal), Ok(e)) = (l.gal(), pi1.group.as_ref()) {
        report.isomorphic_tables = Some(gal.is_isomorphic(&e.table));
    }
    match phi_map(&l, &pres, &pi1) {
        Ok(phi) => {
            if hypotheses {
                if let Err(e) = &pi1.group {
                    report.verdict = TheoremVerdict::EnumerationFailed;
                    report.witness = Some(
                        Witness::new("resource_limit")
                            .with("what", e.what.clone())
                            .with("limit", e.limit),
                    );
                } else if !phi.is_isomorphism() {
                    report.verdict = TheoremVerdict::Fails;
                    report.witness = Some(
                        Witness::new("phi_not_bijective")
                            .with("homomorphism", phi.homomorphism.to_string())
                            .with("injective", phi.injective)
                            .with("surjective", phi.surjective),
                    );
                }
            }
            report.phi = Some(phi);
        }
        Err(e) => {
            if hypotheses {
                report.verdict = TheoremVerdict::Fails;
                report.witness = Some(Witness::new("phi_ill_defined").with("error", e.to_string()));
            }
        }
    }
    report
}
