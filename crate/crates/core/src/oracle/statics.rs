use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::popmodel::PopulationModel;

use super::constants::{CAUCHY_SCHWARZ_RTOL, MOMENT_IDENTITY_RTOL};

/// Expected value of the observed matrix: rows grouped by population, each
/// equal to `p_t` (raw) or `μ_t = (1 + p_t)/2` (normalized).
pub fn expected_matrix(model: &PopulationModel, normalized: bool) -> Matrix {
    expected_matrix_for_labels(model, &model.labels(), normalized)
}

/// Same as [`expected_matrix`] but row `r` follows `labels[r]`.
pub fn expected_matrix_for_labels(
    model: &PopulationModel,
    labels: &[usize],
    normalized: bool,
) -> Matrix {
    let means = if normalized {
        normalized_means(model)
    } else {
        model.probs().to_vec()
    };
    Matrix::from_fn(labels.len(), model.features(), |r, j| means[labels[r]][j])
}

/// `μ_t = (1 + p_t)/2` for every population.
pub fn normalized_means(model: &PopulationModel) -> Vec<Vec<f64>> {
    model
        .probs()
        .iter()
        .map(|row| row.iter().map(|p| (1.0 + p) / 2.0).collect())
        .collect()
}

/// Gram sums of the two mean rows of a two-population static matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticMoments {
    /// `Σ μ₁²`
    pub a: f64,
    /// `Σ μ₁μ₂`
    pub b: f64,
    /// `Σ μ₂²`
    pub c: f64,
    pub n1: usize,
    pub n2: usize,
    pub features: usize,
    pub mu1: Vec<f64>,
    pub mu2: Vec<f64>,
    /// `Σ (μ₁ − μ₂)²`, computed directly.
    pub separation: f64,
    /// `ac − b²`, computed as `a·Σ(μ₁−μ₂)² − (μ₁·(μ₁−μ₂))²` to avoid cancellation.
    pub det: f64,
}

impl StaticMoments {
    /// Moments of a two-population model, of `μ` if `normalized`, else of `p`.
    pub fn from_model(model: &PopulationModel, normalized: bool) -> Result<StaticMoments> {
        if model.populations() != 2 {
            return Err(Error::InvalidParameters(format!(
                "static analysis needs exactly two populations, got {}",
                model.populations()
            )));
        }
        let rows = if normalized {
            normalized_means(model)
        } else {
            model.probs().to_vec()
        };
        compute_abc(&rows[0], &rows[1], model.sizes()[0], model.sizes()[1])
    }

    /// Half the number of individuals, `N = (N₁ + N₂)/2`.
    pub fn half_individuals(&self) -> f64 {
        (self.n1 + self.n2) as f64 / 2.0
    }

    /// Divergence of the two mean rows, `Σ(μ₁ − μ₂)²/K`.
    pub fn mean_divergence(&self) -> f64 {
        self.separation / self.features as f64
    }
}

/// `a = Σμ₁²`, `b = Σμ₁μ₂`, `c = Σμ₂²` plus the derived quantities.
pub fn compute_abc(mu1: &[f64], mu2: &[f64], n1: usize, n2: usize) -> Result<StaticMoments> {
    if mu1.len() != mu2.len() || mu1.is_empty() {
        return Err(Error::InvalidInput(format!(
            "mean rows have lengths {} and {}",
            mu1.len(),
            mu2.len()
        )));
    }
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidInput(
            "population sizes must be positive".into(),
        ));
    }
    if mu1.iter().chain(mu2).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite mean entry".into()));
    }
    let a = dot(mu1, mu1);
    let b = dot(mu1, mu2);
    let c = dot(mu2, mu2);
    let delta: Vec<f64> = mu1.iter().zip(mu2).map(|(x, y)| x - y).collect();
    let separation = dot(&delta, &delta);
    let proj = dot(mu1, &delta);
    let det = (a * separation - proj * proj).max(0.0);
    if a * c - b * b < -CAUCHY_SCHWARZ_RTOL * (a * c).max(1.0) {
        return Err(Error::InvalidState(format!(
            "ac < b² for a={a}, b={b}, c={c}"
        )));
    }
    if (a + c - 2.0 * b - separation).abs() > MOMENT_IDENTITY_RTOL * (a + c).max(1.0) {
        return Err(Error::InvalidState(
            "a + c − 2b differs from Σ(μ₁ − μ₂)²".into(),
        ));
    }
    Ok(StaticMoments {
        a,
        b,
        c,
        n1,
        n2,
        features: mu1.len(),
        mu1: mu1.to_vec(),
        mu2: mu2.to_vec(),
        separation,
        det,
    })
}

/// Exact top-two spectrum of a two-population static matrix.
///
/// `x_i` is the level of `ū_i` on the rows of population 1 and `y_i` on
/// those of population 2, scaled so that `N₁x_i² + N₂y_i² = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticSpectrum {
    pub lambda1_h: f64,
    pub lambda2_h: f64,
    pub s1: f64,
    pub s2: f64,
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    pub gap_h: f64,
    pub gap_x: f64,
    pub c0: f64,
}

impl StaticSpectrum {
    /// Distance from `s_i` to the rest of the spectrum; `i` is 1 or 2.
    /// The second value also borders the zero singular values.
    pub fn gap(&self, i: usize) -> f64 {
        let d = (self.s1 - self.s2).abs();
        if i == 1 {
            d
        } else {
            d.min(self.s2)
        }
    }

    /// `ū_i` expanded to length `N₁ + N₂` following `labels` (0 → x, 1 → y).
    pub fn left_vector(&self, i: usize, labels: &[usize]) -> Vec<f64> {
        let (x, y) = if i == 1 {
            (self.x1, self.y1)
        } else {
            (self.x2, self.y2)
        };
        labels.iter().map(|&l| if l == 0 { x } else { y }).collect()
    }
}

/// Closed-form eigenstructure of `ℋ = 𝒳𝒳ᵀ` restricted to block-constant vectors.
pub fn static_spectrum(m: &StaticMoments) -> Result<StaticSpectrum> {
    let n1 = m.n1 as f64;
    let n2 = m.n2 as f64;
    let d = n1 * m.a - n2 * m.c;
    let disc = (d * d + 4.0 * n1 * n2 * m.b * m.b).sqrt();
    // also rejects NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(disc > 0.0) {
        return Err(Error::DegenerateSpectrum(
            "top two eigenvalues coincide".into(),
        ));
    }
    let trace = n1 * m.a + n2 * m.c;
    let lambda1 = (trace + disc) / 2.0;
    let lambda2 = (m.det * n1 * n2 / lambda1).max(0.0);

    // Each eigenvector is read off whichever row of the 2×2 system avoids
    // cancellation.
    let (u1, u2) = if d >= 0.0 {
        (((d + disc) / 2.0, n1 * m.b), (n2 * m.b, -(d + disc) / 2.0))
    } else {
        ((n2 * m.b, (disc - d) / 2.0), (-(disc - d) / 2.0, n1 * m.b))
    };
    let scale = |(x, y): (f64, f64)| {
        let norm = (n1 * x * x + n2 * y * y).sqrt();
        (x / norm, y / norm)
    };
    let (mut x1, mut y1) = scale(u1);
    if x1 < 0.0 || (x1 == 0.0 && y1 < 0.0) {
        x1 = -x1;
        y1 = -y1;
    }
    let (mut x2, mut y2) = scale(u2);
    // Same orientation rule as the numeric SVD: the largest-magnitude entry is
    // positive, ties resolved toward the first population.
    let lead = if x2.abs() >= y2.abs() { x2 } else { y2 };
    if lead < 0.0 {
        x2 = -x2;
        y2 = -y2;
    }

    let s1 = lambda1.sqrt();
    let s2 = lambda2.sqrt();
    Ok(StaticSpectrum {
        lambda1_h: lambda1,
        lambda2_h: lambda2,
        s1,
        s2,
        x1,
        y1,
        x2,
        y2,
        gap_h: disc,
        gap_x: disc / (s1 + s2),
        c0: m.b.abs() * (m.a * m.c).sqrt() / (m.features as f64 * (m.a + m.c)),
    })
}

/// Relative residual of `Kγ = s₁²(x₁−y₁)² + s₂²(x₂−y₂)²`, where `γ` is the
/// divergence of the two mean rows that `m` was built from.
pub fn verify_separation_identity(m: &StaticMoments, s: &StaticSpectrum, gamma: f64) -> f64 {
    let lhs = m.features as f64 * gamma;
    let rhs = s.s1 * s.s1 * (s.x1 - s.y1).powi(2) + s.s2 * s.s2 * (s.x2 - s.y2).powi(2);
    if lhs > 0.0 {
        (lhs - rhs).abs() / lhs
    } else {
        rhs.abs()
    }
}
