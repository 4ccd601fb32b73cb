use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{Seed, Substream};

/// A mixture of `k` product distributions over `{0,1}^K`.
///
/// Row `t` of `probs` holds `p_t^i`, the probability that feature `i` is 1
/// for an individual of population `t`; `sizes[t]` is the number of
/// individuals drawn from population `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationModel {
    probs: Vec<Vec<f64>>,
    sizes: Vec<usize>,
}

impl PopulationModel {
    pub fn new(probs: Vec<Vec<f64>>, sizes: Vec<usize>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidParameters(format!(
                "need at least two populations, got {}",
                probs.len()
            )));
        }
        if probs.len() != sizes.len() {
            return Err(Error::InvalidParameters(format!(
                "{} probability rows but {} sizes",
                probs.len(),
                sizes.len()
            )));
        }
        let features = probs[0].len();
        if features == 0 {
            return Err(Error::InvalidParameters("need at least one feature".into()));
        }
        for (t, row) in probs.iter().enumerate() {
            if row.len() != features {
                return Err(Error::InvalidParameters(format!(
                    "population {t} has {} features, expected {features}",
                    row.len()
                )));
            }
            if let Some((i, p)) = row
                .iter()
                .enumerate()
                .find(|(_, p)| !(0.0..=1.0).contains(*p))
            {
                return Err(Error::InvalidParameters(format!(
                    "probability p[{t}][{i}] = {p} outside [0, 1]"
                )));
            }
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidParameters(
                "population sizes must be positive".into(),
            ));
        }
        Ok(PopulationModel { probs, sizes })
    }

    /// Number of populations `k`.
    pub fn populations(&self) -> usize {
        self.probs.len()
    }

    /// Number of features `K`.
    pub fn features(&self) -> usize {
        self.probs[0].len()
    }

    pub fn probs(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.probs[t]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Total number of individuals `n`.
    pub fn individuals(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Ground-truth population of every row, rows grouped by population.
    pub fn labels(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(t, &n)| std::iter::repeat_n(t, n))
            .collect()
    }

    /// `ω = min N_t / n`.
    pub fn min_weight(&self) -> f64 {
        *self.sizes.iter().min().unwrap() as f64 / self.individuals() as f64
    }

    /// `σ² = max p(1 − p)` over all entries.
    pub fn max_variance(&self) -> f64 {
        self.probs
            .iter()
            .flatten()
            .map(|p| p * (1.0 - p))
            .fold(0.0, f64::max)
    }

    /// Restricts the model to the listed features.
    pub fn select_features(&self, features: &[usize]) -> Result<PopulationModel> {
        let k = self.features();
        if let Some(&bad) = features.iter().find(|&&f| f >= k) {
            return Err(Error::InvalidParameters(format!(
                "feature {bad} out of range for {k} features"
            )));
        }
        PopulationModel::new(
            self.probs
                .iter()
                .map(|row| features.iter().map(|&f| row[f]).collect())
                .collect(),
            self.sizes.clone(),
        )
    }

    pub fn with_sizes(&self, sizes: Vec<usize>) -> Result<PopulationModel> {
        PopulationModel::new(self.probs.clone(), sizes)
    }
}

/// Minimum over population pairs of the mean squared per-feature gap,
/// `γ = min_{s<t} (1/K) Σ_i (p_s^i − p_t^i)²`.
pub fn divergence(model: &PopulationModel) -> f64 {
    divergence_of_rows(model.probs())
}

/// Divergence of an arbitrary set of equal-length mean rows.
pub fn divergence_of_rows(rows: &[Vec<f64>]) -> f64 {
    let k = rows[0].len() as f64;
    let mut best = f64::INFINITY;
    for s in 0..rows.len() {
        for t in s + 1..rows.len() {
            let d: f64 = rows[s]
                .iter()
                .zip(&rows[t])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            best = best.min(d / k);
        }
    }
    best
}

/// Balanced two-population model used in the experiments: on the first half
/// of the features `p₁ = (1+α)/2 + ε/2` and `p₂ = (1−α)/2 + ε/2`, and on the
/// second half the two values swap. Each population has `n_per_population`
/// individuals.
pub fn two_block_model(
    alpha: f64,
    epsilon: f64,
    features: usize,
    n_per_population: usize,
) -> Result<PopulationModel> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "alpha must be >= 0, got {alpha}"
        )));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameters(format!(
            "epsilon must be >= 0, got {epsilon}"
        )));
    }
    if features == 0 || features % 2 != 0 {
        return Err(Error::InvalidParameters(format!(
            "feature count must be even and positive, got {features}"
        )));
    }
    let high = (1.0 + alpha) / 2.0 + epsilon / 2.0;
    let low = (1.0 - alpha) / 2.0 + epsilon / 2.0;
    if high > 1.0 || low < 0.0 {
        return Err(Error::InvalidParameters(format!(
            "alpha = {alpha}, epsilon = {epsilon} give probabilities outside [0, 1]"
        )));
    }
    let half = features / 2;
    let first: Vec<f64> = (0..features)
        .map(|i| if i < half { high } else { low })
        .collect();
    let second: Vec<f64> = (0..features)
        .map(|i| if i < half { low } else { high })
        .collect();
    PopulationModel::new(vec![first, second], vec![n_per_population; 2])
}

/// Model with `p_t^i` drawn independently and uniformly from
/// `[0.5 − spread, 0.5 + spread]`. The expected divergence of each pair is
/// `2·spread²/3`.
pub fn random_model(
    populations: usize,
    features: usize,
    sizes: Vec<usize>,
    spread: f64,
    seed: Seed,
) -> Result<PopulationModel> {
    if !(0.0..=0.5).contains(&spread) {
        return Err(Error::InvalidParameters(format!(
            "spread must lie in [0, 0.5], got {spread}"
        )));
    }
    let mut rng = Substream::new(seed).rng();
    let probs = (0..populations)
        .map(|_| {
            (0..features)
                .map(|_| 0.5 + spread * rng.random_range(-1.0..=1.0))
                .collect()
        })
        .collect();
    PopulationModel::new(probs, sizes)
}

/// Spread for [`random_model`] whose expected pairwise divergence is `gamma`.
pub fn spread_for_divergence(gamma: f64) -> f64 {
    (1.5 * gamma).sqrt()
}
