use std::collections::BTreeMap;

use serde::Serialize;

use super::run::ExperimentRecord;
use crate::error::{Error, Result};

/// Aggregate of all trials at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: String,
    pub alpha: f64,
    pub gamma: f64,
    #[serde(rename = "K")]
    pub features: usize,
    #[serde(rename = "N")]
    pub n_per_population: usize,
    pub trials: usize,
    pub failures: usize,
    pub mean_success: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub std_success: f64,
}

/// Groups records by `(method, K, N)` in that order and averages the
/// successful ones. Grid points where every trial failed get a NaN mean.
pub fn summarize(records: &[ExperimentRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::InvalidInput("nothing to summarize".into()));
    }
    let mut groups: BTreeMap<(&str, usize, usize), Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.method, r.features, r.n_per_population))
            .or_default()
            .push(r);
    }
    Ok(groups
        .into_iter()
        .map(|((method, features, n), rows)| {
            let rates: Vec<f64> = rows.iter().filter_map(|r| r.success_rate).collect();
            let m = rates.len() as f64;
            let mean = rates.iter().sum::<f64>() / m;
            let std = if rates.len() > 1 {
                (rates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
            } else {
                0.0
            };
            SummaryRow {
                method: method.to_string(),
                alpha: rows[0].alpha,
                gamma: rows[0].gamma,
                features,
                n_per_population: n,
                trials: rows.len(),
                failures: rows.len() - rates.len(),
                mean_success: if rates.is_empty() { f64::NAN } else { mean },
                std_success: if rates.is_empty() { f64::NAN } else { std },
            }
        })
        .collect())
}

pub fn write_summary<W: std::io::Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}
