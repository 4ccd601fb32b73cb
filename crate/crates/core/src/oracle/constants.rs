//! Calibration thresholds used by the verification suites. These are
//! empirical, not theorems: each was chosen with a safety margin over what
//! repeated simulation of the model classes in this crate produces.

/// Absolute slack added to every analytic bound before comparing.
pub const BOUND_SLACK: f64 = 1e-8;

/// Ceiling on `s₁(X − 𝒳)/√K` for normalized Bernoulli noise (entries of
/// range at most 1/2) with `n ≤ K`. Observed values stay near 0.25–0.6.
pub const NOISE_NORM_RATIO_MAX: f64 = 2.0;

/// Ceiling on `Σ_v ‖Â_v − 𝔼_v‖² / (k·K·σ²)` for the rank-k approximation of
/// raw Bernoulli data. Observed values stay below 2 when `n ≤ K`.
pub const RANK_K_ROW_ERROR_RATIO_MAX: f64 = 64.0;

/// Tolerance for `ac ≥ b²` relative to `ac`.
pub const CAUCHY_SCHWARZ_RTOL: f64 = 1e-12;

/// Tolerance for `a + c − 2b = Σ(μ₁ − μ₂)²` relative to `a + c`.
pub const MOMENT_IDENTITY_RTOL: f64 = 1e-10;
