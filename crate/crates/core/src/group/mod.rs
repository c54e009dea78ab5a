//! Group presentations, coset enumeration and finite group tables.

pub mod coset;
pub mod table;
pub mod tietze;
pub mod word;

pub use coset::{coset_enumeration, EnumeratedGroup};
pub use table::{FiniteGroupTable, GroupError, GroupSummary, Quotient};
pub use tietze::{tietze_simplify, TietzeResult};
pub use word::{Abelianization, GroupPresentation, Letter, PresentationError, Word};
