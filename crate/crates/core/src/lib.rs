//! Torsion in the coinvariants of Whitehead's Γ functor applied to
//! `ker d₂` and `coker d²` of finite group presentations.

pub mod error;
pub mod gamma;
pub mod group_ring;
pub mod groups;
pub mod linalg;
pub mod modules;
pub mod pipeline;
pub mod resolution;

pub use error::{Error, Result};
pub use gamma::{
    gamma, gamma_map_check, gamma_of_sum_decomposition, GammaBasis, GammaIndex, GammaModule,
};
pub use group_ring::{GroupRingElement, GroupRingMatrix};
pub use groups::{catalog, catalog_names, parse_group_spec, FiniteGroup, Word};
pub use linalg::{AbelianInvariants, IntMatrix, SparseMatrix};
pub use modules::{tate_h0, tate_h0_checked, tate_h0_via_norm, FpModule, LatticeModule};
pub use pipeline::{
    compute, table, verify, ComputationReport, Options, Side, SideReport, VerifyReport,
};
pub use resolution::{
    abelian_two_generator_resolution, presentation_complex, AbelianResolution, PartialResolution,
};
