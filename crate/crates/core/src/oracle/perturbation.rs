use crate::error::{Error, Result};
use crate::linalg::{norm2, operator_norm, top_k_singular_triplets, DEFAULT_TOL};
use crate::popmodel::{PopulationModel, SampleMatrix};

use super::checks::{BoundCheck, VerificationReport};
use super::constants::NOISE_NORM_RATIO_MAX;
use super::statics::{expected_matrix_for_labels, static_spectrum, StaticMoments};

/// Distance between two unit vectors after choosing the better sign.
pub fn aligned_distance(u: &[f64], v: &[f64]) -> f64 {
    let plus: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    let minus: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    norm2(&plus).min(norm2(&minus))
}

/// Compares the top singular structure of a normalized sample with that of
/// its expectation: the sin-theta bound `‖u_i − ū_i‖ ≤ 4·s₁(X − 𝒳)/gap(i)`
/// for `i = 1, 2`, Weyl's bound `|s_i(X) − s_i(𝒳)| ≤ s₁(X − 𝒳)` for
/// `i ≤ 3`, and the calibration ratio `s₁(X − 𝒳)/√K`.
///
/// Rows of `x` follow its labels when present, otherwise the model's
/// grouped order.
pub fn verify_perturbation_bounds(
    x: &SampleMatrix,
    model: &PopulationModel,
) -> Result<VerificationReport> {
    if !x.is_normalized() {
        return Err(Error::InvalidState(
            "perturbation checks expect normalized data".into(),
        ));
    }
    if x.features() != model.features() {
        return Err(Error::InvalidInput(format!(
            "sample has {} features, model {}",
            x.features(),
            model.features()
        )));
    }
    let labels = match x.labels() {
        Some(l) => l.to_vec(),
        None => model.labels(),
    };
    if labels.len() != x.individuals() {
        return Err(Error::InvalidInput(
            "sample size differs from model sizes".into(),
        ));
    }
    let n1 = labels.iter().filter(|&&l| l == 0).count();
    let n2 = labels.len() - n1;
    if labels.iter().any(|&l| l > 1) || n1 == 0 || n2 == 0 {
        return Err(Error::InvalidInput(
            "need both populations and binary labels".into(),
        ));
    }
    let model = model.with_sizes(vec![n1, n2])?;
    let moments = StaticMoments::from_model(&model, true)?;
    let spectrum = static_spectrum(&moments)?;
    let expected = expected_matrix_for_labels(&model, &labels, true);
    let noise = operator_norm(&x.data().sub(&expected)?)?;

    let depth = 3.min(x.individuals()).min(x.features());
    let svd = top_k_singular_triplets(x.data(), depth, DEFAULT_TOL)?;
    let mut checks = Vec::new();
    for i in 1..=2 {
        let bar = spectrum.left_vector(i, &labels);
        let gap = spectrum.gap(i);
        let bound = if gap > 0.0 {
            4.0 * noise / gap
        } else {
            f64::INFINITY
        };
        checks.push(BoundCheck::upper(
            format!("sin_theta_u{i}"),
            aligned_distance(svd.left(i - 1), &bar),
            bound,
        ));
    }
    let static_values = [spectrum.s1, spectrum.s2, 0.0];
    for (i, value) in static_values.iter().take(depth).enumerate() {
        checks.push(BoundCheck::upper(
            format!("weyl_s{}", i + 1),
            (svd.sigma(i) - value).abs(),
            noise,
        ));
    }
    checks.push(BoundCheck::upper(
        "noise_norm_over_sqrt_k",
        noise / (x.features() as f64).sqrt(),
        NOISE_NORM_RATIO_MAX,
    ));
    Ok(VerificationReport::new(checks))
}
