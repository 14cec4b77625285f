//! Exact integer linear algebra.

mod invariants;
mod lattice;
mod matrix;
mod normal_form;
mod sparse;

pub use invariants::AbelianInvariants;
pub use lattice::{
    cokernel_invariants, echelon_basis, kernel_basis, kernel_basis_rows, rank,
    row_cokernel_invariants, solve_in_lattice, LatticeSolver,
};
pub use matrix::IntMatrix;
pub use normal_form::{
    hermite_normal_form, smith_normal_form, smith_normal_form_with, HermiteForm, SmithDecomposition,
};
pub use sparse::{reduce_presentation, ReducedPresentation, SparseMatrix, SparseVec};
