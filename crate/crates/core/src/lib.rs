//! Finite categories, the homotopy invariants of their nerves, and
//! generalized Lascar groups.

pub mod amalgam;
pub mod budget;
pub mod category;
pub mod complex;
pub mod derive;
pub mod fibration;
pub mod functor;
pub mod group;
pub mod homology;
pub mod homotopy;
pub mod karoubi;
pub mod lascar;
pub mod nerve;
pub mod pi1;
pub mod poset;
pub mod properties;
pub mod report;
pub mod snf;
pub mod zoo;

pub use budget::{Budget, ResourceLimit};
pub use category::{
    validate_category, CategoryError, FiniteCategory, Mor, Obj, RawCategory, RawMorphism,
};
pub use functor::{Functor, FunctorError, NaturalTransformation};
pub use homology::{HomologyGroup, HomologyResult};
pub use report::{PropertyReport, Verdict, Witness};
