//! Exact analysis of the two-population static matrix, checks of the
//! perturbation bounds that connect it to sampled data, and two baselines
//! that use information an honest classifier does not have.

mod baselines;
mod checks;
pub mod constants;
mod perturbation;
mod statics;

pub use baselines::{max_weight_balanced_cut, oracle_classifier, MAX_CUT_INDIVIDUALS};
pub use checks::{static_property_checks, BoundCheck, VerificationReport};
pub use perturbation::{aligned_distance, verify_perturbation_bounds};
pub use statics::{
    compute_abc, expected_matrix, expected_matrix_for_labels, normalized_means, static_spectrum,
    verify_separation_identity, StaticMoments, StaticSpectrum,
};
