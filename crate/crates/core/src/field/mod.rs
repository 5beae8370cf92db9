//! Exact and floating scalars, dense matrices, subspaces and eigenspace
//! splittings.

mod matrix;
mod scalar;
mod spectral;
mod subspace;

pub use matrix::{hermitian_definite, Definiteness, Endo, Matrix};
pub use scalar::{Exact, Gq, Scalar, Tolerance, C64};
pub use spectral::{ad_eig_split, charpoly, eig_split, grading_frame, integer_eigenspaces, Frame};
pub use subspace::{dot, extend_basis, Subspace};
