//! Exact Sullivan minimal models of algebras over tame operads.

pub mod complex;
pub mod engine;
pub mod error;
pub mod free;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod operad;
pub mod palgebra;
pub mod samples;

pub use complex::{cone, ChainComplex, ChainMap, CohomologyResult, Convention, GradedSpace};
pub use error::{Error, Result};
pub use linalg::{Rat, RatMatrix, SparseVec, SubspaceBasis};
pub use palgebra::{Algebra, AlgebraMap, Elem, FreeMorphism, TabularAlgebra};
