//! Exact rational linear algebra.

mod echelon;
mod matrix;
mod rat;

pub use echelon::{image, kernel, quotient_section, rank, rref, solve, Echelon, Rref, SubspaceBasis};
pub use matrix::{add_entry, axpy, dot, scale, unit_vec, RatMatrix, SparseVec};
pub use rat::{ParseRatError, Rat};
