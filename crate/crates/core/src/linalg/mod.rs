//! Dense real matrix kernels: truncated SVD, rank-k approximation and norms.

mod matrix;
pub mod svd;
pub mod symmetric;

pub use matrix::{axpy, dot, norm2, squared_distance, Matrix};
pub use svd::{
    frobenius_norm, operator_norm, rank_k_approximation, reconstruct, top_k_singular_triplets,
    triplet_residual, SingularTriplet, SpectralSummary, DEFAULT_TOL, DEGENERATE_RATIO,
};
pub use symmetric::{symmetric_eigen, SymmetricEigen};
