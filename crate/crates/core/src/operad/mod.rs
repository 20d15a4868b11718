//! Operads as finite tables: built-ins, validation, tameness and morphisms.

pub mod builtin;
pub mod morphism;
pub mod table;
pub mod tree;
pub mod validate;

pub use builtin::builtin;
pub use morphism::OperadMorphism;
pub use table::{
    compose_arity_degree, element_tame, min_tame_level, tameness_index, ArityDegree, ArityTable, DegreeFloor,
    OpIndex, OperadTable, Presentation, TamenessReport, Unitality,
};
pub use validate::{validate, Axiom, ValidationReport, Violation};
