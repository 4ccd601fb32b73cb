use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Method};
use crate::classify::{classify, classify_block_best_vector, default_rounds, ClassifyParams};
use crate::error::{Error, Result};
use crate::oracle::{max_weight_balanced_cut, oracle_classifier};
use crate::partition::{misclassification, partition, PartitionParams};
use crate::popmodel::{normalize, sample, two_block_model, PopulationModel, SampleMatrix};
use crate::rng::{Seed, Substream};

/// One method on one trial. Failed runs keep their grid coordinates and leave
/// the measurements empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub method: &'static str,
    pub alpha: f64,
    pub gamma: f64,
    #[serde(rename = "K")]
    pub features: usize,
    #[serde(rename = "N")]
    pub n_per_population: usize,
    pub trial: usize,
    pub seed: Seed,
    pub success_rate: Option<f64>,
    pub raw_misclassification: Option<usize>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub used_vector: String,
    pub wall_time: f64,
}

impl ExperimentRecord {
    pub fn failed(&self) -> bool {
        self.success_rate.is_none()
    }

    /// `raw / (2n)`, the fraction of misplaced individuals.
    pub fn misclassification_rate(&self) -> Option<f64> {
        let n = 2 * self.n_per_population;
        self.raw_misclassification
            .map(|r| r as f64 / (2 * n) as f64)
    }
}

/// Seed of one trial; independent of the method so that every method sees
/// the same sample.
pub fn trial_seed(base: Seed, features: usize, n_per_population: usize, trial: usize) -> Seed {
    Substream::new(base)
        .child(features as u64)
        .child(n_per_population as u64)
        .child(trial as u64)
        .seed()
}

/// Two-block model repeated `repeats` times along the features, so that every
/// consecutive run of `features` columns is itself a balanced two-block model.
pub fn repeated_two_block(
    alpha: f64,
    epsilon: f64,
    features: usize,
    repeats: usize,
    n_per_population: usize,
) -> Result<PopulationModel> {
    let base = two_block_model(alpha, epsilon, features, n_per_population)?;
    let rows = base
        .probs()
        .iter()
        .map(|row| {
            row.iter()
                .copied()
                .cycle()
                .take(features * repeats)
                .collect()
        })
        .collect();
    PopulationModel::new(rows, base.sizes().to_vec())
}

struct Outcome {
    labels: Vec<usize>,
    s1: Option<f64>,
    s2: Option<f64>,
    used_vector: String,
}

impl Outcome {
    fn plain(labels: Vec<usize>) -> Self {
        Outcome {
            labels,
            s1: None,
            s2: None,
            used_vector: String::new(),
        }
    }
}

struct Trial<'a> {
    cfg: &'a ExperimentConfig,
    model: &'a PopulationModel,
    full: &'a SampleMatrix,
    first: &'a SampleMatrix,
    features: usize,
    rounds: usize,
    seed: Seed,
}

impl Trial<'_> {
    fn run(&self, method: Method) -> Result<Outcome> {
        match method {
            Method::Classify => {
                let mut params = ClassifyParams::new(
                    self.cfg.gamma(),
                    self.model.min_weight(),
                    self.features,
                    self.rounds,
                    Substream::new(self.seed).child(1).seed(),
                )?;
                if let Some(s) = self.cfg.threshold_scale {
                    params.threshold_scale = s;
                }
                let out = classify(self.full, &params)?;
                let first = &out.rounds[0];
                let mixed = out
                    .rounds
                    .iter()
                    .any(|r| r.used_vector != first.used_vector);
                Ok(Outcome {
                    labels: out.labels,
                    s1: Some(first.s1),
                    s2: Some(first.s2),
                    used_vector: if mixed {
                        "mixed"
                    } else {
                        first.used_vector.as_str()
                    }
                    .into(),
                })
            }
            Method::ClassifyBestVector => {
                let x = normalize(self.first)?;
                let (round, _) = classify_block_best_vector(&x, &self.model.labels())?;
                Ok(Outcome {
                    labels: round.labels,
                    s1: Some(round.s1),
                    s2: Some(round.s2),
                    used_vector: round.used_vector.as_str().into(),
                })
            }
            Method::Partition => {
                let params = PartitionParams::new(2, self.features)?;
                Ok(Outcome::plain(partition(self.first, &params)?.labels))
            }
            Method::Oracle => Ok(Outcome::plain(oracle_classifier(self.model, self.full)?)),
            Method::Maxcut => Ok(Outcome::plain(max_weight_balanced_cut(self.first)?)),
        }
    }
}

fn run_trial(
    cfg: &ExperimentConfig,
    features: usize,
    n_per_population: usize,
    trial: usize,
) -> Vec<ExperimentRecord> {
    let seed = trial_seed(cfg.base_seed, features, n_per_population, trial);
    let record = |method: Method| ExperimentRecord {
        method: method.as_str(),
        alpha: cfg.alpha,
        gamma: cfg.gamma(),
        features,
        n_per_population,
        trial,
        seed,
        success_rate: None,
        raw_misclassification: None,
        s1: None,
        s2: None,
        used_vector: String::new(),
        wall_time: 0.0,
    };
    let n = 2 * n_per_population;
    let rounds = if cfg.methods.contains(&Method::Classify) {
        cfg.rounds.unwrap_or_else(|| default_rounds(n))
    } else {
        1
    };
    let prepared = (|| -> Result<_> {
        let model =
            repeated_two_block(cfg.alpha, cfg.epsilon(), features, rounds, n_per_population)?;
        let full = sample(&model, seed);
        let first_cols: Vec<usize> = (0..features).collect();
        let first = full.select_features(&first_cols)?;
        Ok((model, full, first))
    })();
    let (model, full, first) = match prepared {
        Ok(p) => p,
        Err(e) => {
            return cfg
                .methods
                .iter()
                .map(|&m| ExperimentRecord {
                    used_vector: format!("error: {e}"),
                    ..record(m)
                })
                .collect()
        }
    };
    let truth = model.labels();
    let ctx = Trial {
        cfg,
        model: &model,
        full: &full,
        first: &first,
        features,
        rounds,
        seed,
    };
    cfg.methods
        .iter()
        .map(|&method| {
            let start = Instant::now();
            let result = ctx.run(method).and_then(|o| {
                let mis = misclassification(&o.labels, &truth, 2)?;
                Ok((o, mis))
            });
            let wall_time = if cfg.record_timing {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            };
            match result {
                Ok((o, mis)) => ExperimentRecord {
                    success_rate: Some(mis.overlap as f64 / n as f64),
                    raw_misclassification: Some(mis.raw),
                    s1: o.s1,
                    s2: o.s2,
                    used_vector: o.used_vector,
                    wall_time,
                    ..record(method)
                },
                Err(e) => ExperimentRecord {
                    used_vector: format!("error: {e}"),
                    wall_time,
                    ..record(method)
                },
            }
        })
        .collect()
}

/// Runs every method on every grid point and trial. Records come out ordered
/// by `K`, then `N`, then trial, then method as listed, whatever the
/// execution schedule.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize, usize)> = cfg
        .features
        .iter()
        .flat_map(|&k| {
            cfg.n_per_population
                .iter()
                .flat_map(move |&n| (0..cfg.trials).map(move |t| (k, n, t)))
        })
        .collect();
    let records: Vec<ExperimentRecord> = jobs
        .par_iter()
        .map(|&(k, n, t)| run_trial(cfg, k, n, t))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    if records.is_empty() {
        return Err(Error::InvalidState("experiment produced no records".into()));
    }
    Ok(records)
}

/// Writes records as CSV, one column per record field.
pub fn write_records<W: std::io::Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}
