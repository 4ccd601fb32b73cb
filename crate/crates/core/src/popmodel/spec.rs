use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{two_block_model, PopulationModel};
use crate::error::{Error, Result};

/// How the probability rows of a model file are given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbSpec {
    Explicit(Vec<Vec<f64>>),
    TwoBlock {
        alpha: f64,
        #[serde(default)]
        epsilon: Option<f64>,
    },
}

/// JSON model file: `{"k": 2, "K": 1000, "probs": ..., "sizes": [100, 100]}`.
///
/// `probs` is either a `k × K` array or a generator `{"alpha": a, "epsilon": e}`
/// for the balanced two-block model (epsilon defaults to `0.1·alpha`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub k: usize,
    #[serde(rename = "K")]
    pub features: usize,
    pub probs: ProbSpec,
    pub sizes: Vec<usize>,
}

impl ModelSpec {
    pub fn build(&self) -> Result<PopulationModel> {
        if self.sizes.len() != self.k {
            return Err(Error::InvalidParameters(format!(
                "k = {} but {} sizes given",
                self.k,
                self.sizes.len()
            )));
        }
        let model = match &self.probs {
            ProbSpec::Explicit(rows) => PopulationModel::new(rows.clone(), self.sizes.clone())?,
            ProbSpec::TwoBlock { alpha, epsilon } => {
                if self.k != 2 {
                    return Err(Error::InvalidParameters(
                        "the alpha/epsilon generator describes exactly two populations".into(),
                    ));
                }
                two_block_model(*alpha, epsilon.unwrap_or(0.1 * alpha), self.features, 1)?
                    .with_sizes(self.sizes.clone())?
            }
        };
        if model.populations() != self.k || model.features() != self.features {
            return Err(Error::InvalidParameters(format!(
                "declared k = {}, K = {} but probabilities are {}x{}",
                self.k,
                self.features,
                model.populations(),
                model.features()
            )));
        }
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<ModelSpec> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<ModelSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ModelSpec::from_json(&text)
    }
}
