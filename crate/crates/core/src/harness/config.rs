use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Seed;

/// Methods the experiment runner knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Threshold rule with majority vote over disjoint feature blocks.
    Classify,
    /// Both singular vectors tried against the truth; diagnostic only.
    ClassifyBestVector,
    Partition,
    /// Likelihood ratio with the true probabilities.
    Oracle,
    /// Brute-force balanced max cut, small samples only.
    Maxcut,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Classify => "classify",
            Method::ClassifyBestVector => "classify-best-vector",
            Method::Partition => "partition",
            Method::Oracle => "oracle",
            Method::Maxcut => "maxcut",
        }
    }
}

fn default_trials() -> usize {
    20
}

fn default_n_grid() -> Vec<usize> {
    vec![25, 50, 100, 200, 400, 800]
}

fn default_k() -> usize {
    2
}

/// A sweep over feature counts and population sizes for the balanced
/// two-block model.
///
/// For every `K` in `features`, `N` in `n_per_population` and trial, one
/// sample is drawn and every method is run on it. The sample has `K` features
/// per classification round (`rounds` blocks of `K` when `classify` is
/// listed), and all other methods see the first `K` features, except the
/// likelihood oracle, which sees all of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub alpha: f64,
    /// Defaults to `0.1·alpha`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(rename = "K")]
    pub features: Vec<usize>,
    #[serde(rename = "N", default = "default_n_grid")]
    pub n_per_population: Vec<usize>,
    /// Number of populations; the two-block generator supports only 2.
    #[serde(default = "default_k")]
    pub k: usize,
    pub methods: Vec<Method>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: Seed,
    /// Classification rounds; defaults to `⌈log₂ n⌉`.
    #[serde(default)]
    pub rounds: Option<usize>,
    /// Multiplier on the classification threshold.
    #[serde(default)]
    pub threshold_scale: Option<f64>,
    /// Directory for the output files.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Measure wall time per method. Off by default so outputs are
    /// reproducible byte for byte.
    #[serde(default)]
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ExperimentConfig::from_json(&text)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(0.1 * self.alpha)
    }

    /// Divergence of the generated model, `α²`.
    pub fn gamma(&self) -> f64 {
        self.alpha * self.alpha
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.methods.is_empty() || self.features.is_empty() || self.n_per_population.is_empty() {
            return bad("methods, K and N lists must be non-empty".into());
        }
        if self.k != 2 {
            return bad(format!(
                "the two-block generator needs k = 2, got {}",
                self.k
            ));
        }
        if let Some(&f) = self.features.iter().find(|&&f| f < 2 || f % 2 != 0) {
            return bad(format!("every K must be even and at least 2, got {f}"));
        }
        if self.n_per_population.contains(&0) {
            return bad("every N must be positive".into());
        }
        if self.rounds == Some(0) {
            return bad("rounds must be at least 1".into());
        }
        if let Some(s) = self.threshold_scale {
            if !(s > 0.0 && s.is_finite()) {
                return bad("threshold scale must be positive".into());
            }
        }
        let eps = self.epsilon();
        if !(self.alpha >= 0.0 && eps >= 0.0 && (1.0 + self.alpha + eps) / 2.0 <= 1.0) {
            return bad(format!(
                "alpha = {}, epsilon = {eps} give probabilities outside [0, 1]",
                self.alpha
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_defaults() {
        let cfg = ExperimentConfig::from_json(
            r#"{"alpha": 0.04, "K": [200, 400], "methods": ["classify-best-vector", "oracle"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.trials, 20);
        assert_eq!(cfg.n_per_population, vec![25, 50, 100, 200, 400, 800]);
        assert!((cfg.epsilon() - 0.004).abs() < 1e-15);
        assert!((cfg.gamma() - 0.0016).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"alpha": 0.04, "K": [200], "methods": []}"#,
            r#"{"alpha": 0.04, "K": [201], "methods": ["oracle"]}"#,
            r#"{"alpha": 0.04, "K": [200], "methods": ["oracle"], "trials": 0}"#,
            r#"{"alpha": 1.0, "K": [200], "methods": ["oracle"]}"#,
            r#"{"alpha": 0.04, "K": [200], "methods": ["nope"]}"#,
            r#"{"alpha": 0.04, "K": [200], "methods": ["oracle"], "extra": 1}"#,
        ] {
            assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
        }
    }
}
