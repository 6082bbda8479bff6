//! Vector fields, distributions and their derived flags.

mod bundle;
mod field;
mod flag;

pub use bundle::{annihilator, annihilator_of, clear_row, intersect, Codistribution, Distribution};
pub use field::{OneForm, VectorField};
pub use flag::{cauchy_bundle, derived_bundle, refined_derived_type, BracketTable, DerivedFlag, DerivedLevel, DerivedTypeRecord};

#[cfg(test)]
mod tests;
