//! Floating-point checks in a truncated path-space representation.

mod checks;
pub mod eigen;
mod rep;
pub mod sparse;

pub use checks::{
    hausdorff_to_circle, loop_spectrum, relation_residuals, spectral_bound, Residual,
    ResidualReport, SpectrumReport, Tolerances, ZERO_EIGENVALUE,
};
pub use eigen::{eigenvalues_dense, eigenvalues_sparse, EigenError};
pub use rep::{build_rep, op_of_term, NumericError, PathBasis, TruncatedRep, MAX_BASIS};
pub use sparse::SparseOperator;
