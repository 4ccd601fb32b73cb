//! Two-population classification from the top two left singular vectors of
//! the normalized data matrix, repeated over disjoint feature blocks and
//! combined by majority vote.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{top_k_singular_triplets, DEFAULT_TOL, DEGENERATE_RATIO};
use crate::popmodel::{normalize, split_feature_blocks, FeatureBlocks, SampleMatrix};
use crate::rng::Seed;

/// Inputs of the threshold rule and the round structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyParams {
    /// Divergence `γ` assumed for each feature block.
    pub gamma: f64,
    /// Lower bound on `min(N₁, N₂)/n`.
    pub omega_min: f64,
    /// Features per round.
    pub block_size: usize,
    pub rounds: usize,
    /// Target per-round error factor `f`.
    pub error_factor_target: f64,
    pub seed: Seed,
    /// Multiplier applied to the threshold `T`; 1 keeps the default constant.
    pub threshold_scale: f64,
}

impl ClassifyParams {
    pub fn new(
        gamma: f64,
        omega_min: f64,
        block_size: usize,
        rounds: usize,
        seed: Seed,
    ) -> Result<Self> {
        let p = ClassifyParams {
            gamma,
            omega_min,
            block_size,
            rounds,
            error_factor_target: 0.1,
            seed,
            threshold_scale: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Default round structure for `n` individuals and `available` features:
    /// `⌈log₂ n⌉` rounds, each with the smallest multiple of 100 that is at
    /// least `2n ln n`, capped so that all rounds fit.
    pub fn with_defaults(
        n: usize,
        available: usize,
        gamma: f64,
        omega_min: f64,
        seed: Seed,
    ) -> Result<Self> {
        let rounds = default_rounds(n);
        let wanted = default_block_size(n);
        let cap = available / rounds;
        if cap < 2 {
            return Err(Error::InvalidParameters(format!(
                "{available} features cannot be split into {rounds} rounds"
            )));
        }
        ClassifyParams::new(gamma, omega_min, wanted.min(cap), rounds, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidParameters(format!(
                "gamma must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        if !(self.omega_min > 0.0 && self.omega_min <= 0.5) {
            return Err(Error::InvalidParameters(format!(
                "omega_min must lie in (0, 1/2], got {}",
                self.omega_min
            )));
        }
        if self.rounds == 0 || self.block_size < 2 {
            return Err(Error::InvalidParameters(
                "need at least one round of at least two features".into(),
            ));
        }
        if !(self.error_factor_target > 0.0 && self.error_factor_target < 0.5) {
            return Err(Error::InvalidParameters(format!(
                "error factor target must lie in (0, 1/2), got {}",
                self.error_factor_target
            )));
        }
        if !(self.threshold_scale > 0.0 && self.threshold_scale.is_finite()) {
            return Err(Error::InvalidParameters(
                "threshold scale must be positive".into(),
            ));
        }
        Ok(())
    }
}

pub fn default_rounds(n: usize) -> usize {
    (n.max(2) as f64).log2().ceil() as usize
}

pub fn default_block_size(n: usize) -> usize {
    let target = 2.0 * n as f64 * (n.max(2) as f64).ln();
    ((target / 100.0).ceil() as usize).max(1) * 100
}

/// Which singular vector a round used to split the individuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitVector {
    U1,
    U2,
}

impl SplitVector {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitVector::U1 => "u1",
            SplitVector::U2 => "u2",
        }
    }
}

/// Result of one classification round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundOutcome {
    /// Binary labels; which side is called 0 carries no meaning.
    pub labels: Vec<usize>,
    pub used_vector: SplitVector,
    pub s1: f64,
    pub s2: f64,
    pub threshold: f64,
}

/// `T = (15N/32)·√(3·ω_min·γ)`, where `N` is half the number of individuals.
pub fn threshold_t(half_individuals: f64, omega_min: f64, gamma: f64) -> f64 {
    15.0 * half_individuals / 32.0 * (3.0 * omega_min * gamma).sqrt()
}

/// Labels entry `j` as 1 when `v[j] >= cut` and 0 otherwise.
pub fn split_at(v: &[f64], cut: f64) -> Vec<usize> {
    v.iter().map(|&x| usize::from(x >= cut)).collect()
}

/// Average of the entries of `u`.
pub fn mixture_mean(u: &[f64]) -> f64 {
    u.iter().sum::<f64>() / u.len() as f64
}

struct TopTwo {
    u1: Vec<f64>,
    u2: Vec<f64>,
    s1: f64,
    s2: f64,
}

fn top_two(x: &SampleMatrix) -> Result<TopTwo> {
    if !x.is_normalized() {
        return Err(Error::InvalidState(
            "classification expects normalized data".into(),
        ));
    }
    if x.individuals() < 2 || x.features() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 individuals and 2 features, got {}x{}",
            x.individuals(),
            x.features()
        )));
    }
    let svd = top_k_singular_triplets(x.data(), 2, DEFAULT_TOL)?;
    if svd.sigma(0) <= DEGENERATE_RATIO {
        return Err(Error::DegenerateInput(format!(
            "largest singular value {} is numerically zero",
            svd.sigma(0)
        )));
    }
    Ok(TopTwo {
        u1: svd.left(0).to_vec(),
        u2: svd.left(1).to_vec(),
        s1: svd.sigma(0),
        s2: svd.sigma(1),
    })
}

/// One round on a normalized block: if `s₂(X) > T` split by the sign of
/// `u₂`, otherwise split `u₁` at its mixture mean.
pub fn classify_block(x: &SampleMatrix, params: &ClassifyParams) -> Result<RoundOutcome> {
    params.validate()?;
    let top = top_two(x)?;
    let half = x.individuals() as f64 / 2.0;
    let threshold = params.threshold_scale * threshold_t(half, params.omega_min, params.gamma);
    let (labels, used_vector) = if top.s2 > threshold {
        (split_at(&top.u2, 0.0), SplitVector::U2)
    } else {
        (split_at(&top.u1, mixture_mean(&top.u1)), SplitVector::U1)
    };
    Ok(RoundOutcome {
        labels,
        used_vector,
        s1: top.s1,
        s2: top.s2,
        threshold,
    })
}

/// Tries both the `u₁` and the `u₂` split and keeps whichever agrees better
/// with `truth`. This peeks at the ground truth, so it is a diagnostic of how
/// much signal the two vectors carry, not a classifier.
pub fn classify_block_best_vector(
    x: &SampleMatrix,
    truth: &[usize],
) -> Result<(RoundOutcome, f64)> {
    if truth.len() != x.individuals() {
        return Err(Error::InvalidInput(
            "truth length differs from sample size".into(),
        ));
    }
    let top = top_two(x)?;
    let by_u1 = split_at(&top.u1, mixture_mean(&top.u1));
    let by_u2 = split_at(&top.u2, 0.0);
    let r1 = binary_success_rate(&by_u1, truth);
    let r2 = binary_success_rate(&by_u2, truth);
    let (labels, used_vector, rate) = if r2 > r1 {
        (by_u2, SplitVector::U2, r2)
    } else {
        (by_u1, SplitVector::U1, r1)
    };
    Ok((
        RoundOutcome {
            labels,
            used_vector,
            s1: top.s1,
            s2: top.s2,
            threshold: f64::NAN,
        },
        rate,
    ))
}

/// Fraction of agreement between two binary labelings, maximized over the swap.
pub fn binary_success_rate(labels: &[usize], truth: &[usize]) -> f64 {
    let agree = labels.iter().zip(truth).filter(|(a, b)| a == b).count();
    let n = labels.len();
    agree.max(n - agree) as f64 / n as f64
}

/// Aligns every round to round 0 by the label swap with the larger
/// agreement, then takes a per-individual majority. Ties go to round 0.
pub fn majority_vote(rounds: &[Vec<usize>]) -> Result<Vec<usize>> {
    let first = rounds
        .first()
        .ok_or_else(|| Error::InvalidInput("majority vote needs at least one round".into()))?;
    let n = first.len();
    if rounds.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("rounds have different lengths".into()));
    }
    if rounds.iter().flatten().any(|&l| l > 1) {
        return Err(Error::InvalidInput(
            "majority vote expects binary labels".into(),
        ));
    }
    let mut ones = vec![0usize; n];
    for round in rounds {
        let agree = round.iter().zip(first).filter(|(a, b)| a == b).count();
        let swap = agree < n - agree;
        for (count, &l) in ones.iter_mut().zip(round) {
            let aligned = if swap { 1 - l } else { l };
            *count += aligned;
        }
    }
    let total = rounds.len();
    Ok(ones
        .iter()
        .zip(first)
        .map(|(&c, &base)| match (2 * c).cmp(&total) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => base,
        })
        .collect())
}

/// Full multi-round output.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOutcome {
    pub labels: Vec<usize>,
    pub rounds: Vec<RoundOutcome>,
    pub blocks: FeatureBlocks,
}

/// Normalizes the raw sample, splits the features into disjoint random
/// blocks, classifies each block and majority-votes the rounds.
pub fn classify(s: &SampleMatrix, params: &ClassifyParams) -> Result<ClassifyOutcome> {
    params.validate()?;
    if s.is_normalized() {
        return Err(Error::InvalidState("classify expects raw 0/1 data".into()));
    }
    let blocks = split_feature_blocks(s.features(), params.block_size, params.rounds, params.seed)?;
    let x = normalize(s)?;
    let rounds: Vec<RoundOutcome> = blocks
        .blocks()
        .par_iter()
        .map(|cols| classify_block(&x.select_features(cols)?, params))
        .collect::<Result<_>>()?;
    let labels = majority_vote(&rounds.iter().map(|r| r.labels.clone()).collect::<Vec<_>>())?;
    Ok(ClassifyOutcome {
        labels,
        rounds,
        blocks,
    })
}
