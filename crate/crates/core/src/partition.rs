//! Clustering into `k` populations from a rank-`k` approximation: for a
//! sweep of scales, greedily carve out the densest balls of rows, attach the
//! remaining rows to the nearest ball center, and keep the scale with the
//! smallest within-cluster scatter.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{squared_distance, top_k_singular_triplets, Matrix, DEFAULT_TOL};
use crate::popmodel::SampleMatrix;
use crate::rng::Seed;

pub const DEFAULT_BALL_FACTOR: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionParams {
    pub k: usize,
    /// Number of scales `Γ_j = K·2^{-j}`, `j = 1..=gamma_sweep_length`.
    pub gamma_sweep_length: usize,
    /// A row `w` is in the ball of `v` when `‖Â_w − Â_v‖² ≤ ball_factor·Γ_j`.
    pub ball_factor: f64,
    /// Carried for the record; the algorithm itself is deterministic.
    pub seed: Seed,
}

impl PartitionParams {
    /// Default sweep `2·⌈log₂ K⌉` and ball factor 0.01 for `K` features.
    pub fn new(k: usize, features: usize) -> Result<Self> {
        let p = PartitionParams {
            k,
            gamma_sweep_length: default_sweep_length(features),
            ball_factor: DEFAULT_BALL_FACTOR,
            seed: 0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameters("k must be at least 1".into()));
        }
        if self.gamma_sweep_length == 0 {
            return Err(Error::InvalidParameters(
                "sweep length must be at least 1".into(),
            ));
        }
        if !(self.ball_factor > 0.0 && self.ball_factor.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "ball factor must be positive, got {}",
                self.ball_factor
            )));
        }
        Ok(())
    }
}

pub fn default_sweep_length(features: usize) -> usize {
    (2 * (features.max(2) as f64).log2().ceil() as usize).max(1)
}

/// The outcome at one scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidatePartition {
    pub gamma_j: f64,
    pub sets: Vec<Vec<usize>>,
    pub centers: Vec<Vec<f64>>,
    pub score: f64,
    /// Set when the rows ran out before `k` balls were found.
    pub degenerate: bool,
}

impl CandidatePartition {
    /// Set index of every individual.
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut labels = vec![0; n];
        for (i, set) in self.sets.iter().enumerate() {
            for &v in set {
                labels[v] = i;
            }
        }
        labels
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionResult {
    pub labels: Vec<usize>,
    pub chosen_gamma: f64,
    /// 1-based index `J` of the chosen scale.
    pub chosen_index: usize,
    pub score: f64,
    pub all_candidates: Option<Vec<CandidatePartition>>,
}

/// Indices `w` with `‖ahat_w − ahat_v‖² ≤ ball_factor·gamma_j`.
pub fn q_ball(ahat: &Matrix, v: usize, gamma_j: f64, ball_factor: f64) -> Vec<usize> {
    let radius = ball_factor * gamma_j;
    let center = ahat.row(v);
    (0..ahat.rows())
        .filter(|&w| w == v || squared_distance(ahat.row(w), center) <= radius)
        .collect()
}

/// One scale of the sweep, on the rows of `ahat`.
pub fn candidate_partition(
    ahat: &Matrix,
    gamma_j: f64,
    k: usize,
    ball_factor: f64,
) -> Result<CandidatePartition> {
    check_candidate_args(ahat, gamma_j, k, ball_factor)?;
    Ok(candidate_from_distances(
        ahat,
        &pairwise(ahat),
        gamma_j,
        k,
        ball_factor,
    ))
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_candidate_args(rows: &Matrix, gamma_j: f64, k: usize, ball_factor: f64) -> Result<()> {
    if !(gamma_j > 0.0) || !(ball_factor > 0.0) {
        return Err(Error::InvalidParameters(
            "scale and ball factor must be positive".into(),
        ));
    }
    if k == 0 || rows.rows() < k {
        return Err(Error::InvalidInput(format!(
            "cannot split {} rows into {k} sets",
            rows.rows()
        )));
    }
    Ok(())
}

fn pairwise(rows: &Matrix) -> Vec<f64> {
    let n = rows.rows();
    let mut d = vec![0.0; n * n];
    for v in 0..n {
        for w in v + 1..n {
            let x = squared_distance(rows.row(v), rows.row(w));
            d[v * n + w] = x;
            d[w * n + v] = x;
        }
    }
    d
}

fn candidate_from_distances(
    rows: &Matrix,
    dist: &[f64],
    gamma_j: f64,
    k: usize,
    ball_factor: f64,
) -> CandidatePartition {
    let n = rows.rows();
    let dim = rows.cols();
    let radius = ball_factor * gamma_j;
    let mut covered = vec![false; n];
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut degenerate = false;

    for _ in 0..k {
        let mut best: Option<(usize, usize)> = None;
        for v in (0..n).filter(|&v| !covered[v]) {
            let size = (0..n)
                .filter(|&w| !covered[w] && dist[v * n + w] <= radius)
                .count();
            if best.is_none_or(|(_, s)| size > s) {
                best = Some((v, size));
            }
        }
        let Some((v, _)) = best else {
            degenerate = true;
            sets.push(Vec::new());
            centers.push(vec![0.0; dim]);
            continue;
        };
        let ball: Vec<usize> = (0..n)
            .filter(|&w| !covered[w] && dist[v * n + w] <= radius)
            .collect();
        let mut center = vec![0.0; dim];
        for &w in &ball {
            covered[w] = true;
            for (c, x) in center.iter_mut().zip(rows.row(w)) {
                *c += x;
            }
        }
        let size = ball.len() as f64;
        center.iter_mut().for_each(|c| *c /= size);
        sets.push(ball);
        centers.push(center);
    }

    for v in (0..n).filter(|&v| !covered[v]) {
        let nearest = (0..k)
            .map(|i| (i, squared_distance(rows.row(v), &centers[i])))
            .fold(
                (0, f64::INFINITY),
                |acc, x| if x.1 < acc.1 { x } else { acc },
            )
            .0;
        sets[nearest].push(v);
    }
    for set in &mut sets {
        set.sort_unstable();
    }
    let score = sets
        .iter()
        .zip(&centers)
        .map(|(set, c)| {
            set.iter()
                .map(|&v| squared_distance(rows.row(v), c))
                .sum::<f64>()
        })
        .sum();
    CandidatePartition {
        gamma_j,
        sets,
        centers,
        score,
        degenerate,
    }
}

/// Runs the scale sweep on the rank-`k` approximation of the raw data and
/// returns the candidate with the smallest scatter (ties to the larger scale).
pub fn partition(a: &SampleMatrix, params: &PartitionParams) -> Result<PartitionResult> {
    partition_impl(a, params, false)
}

/// Like [`partition`] but keeps every candidate in the result.
pub fn partition_with_candidates(
    a: &SampleMatrix,
    params: &PartitionParams,
) -> Result<PartitionResult> {
    partition_impl(a, params, true)
}

fn partition_impl(
    a: &SampleMatrix,
    params: &PartitionParams,
    keep: bool,
) -> Result<PartitionResult> {
    params.validate()?;
    let (n, features) = (a.individuals(), a.features());
    let k = params.k;
    if n < k || features < k {
        return Err(Error::InvalidInput(format!(
            "need at least k = {k} individuals and features, got {n}x{features}"
        )));
    }
    // Rows of Â = UΣVᵀ have the same pairwise distances as rows of UΣ, so
    // the sweep runs in k coordinates and centers are mapped back through V.
    let svd = top_k_singular_triplets(a.data(), k, DEFAULT_TOL)?;
    let coords = Matrix::from_fn(n, k, |r, c| svd.sigma(c) * svd.left(c)[r]);
    let dist = pairwise(&coords);
    let mut candidates: Vec<CandidatePartition> = (1..=params.gamma_sweep_length)
        .into_par_iter()
        .map(|j| {
            let gamma_j = features as f64 * 0.5f64.powi(j as i32);
            candidate_from_distances(&coords, &dist, gamma_j, k, params.ball_factor)
        })
        .collect();

    let (best, _) = candidates
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (j, c)| {
            if c.score < acc.1 {
                (j, c.score)
            } else {
                acc
            }
        });
    for cand in &mut candidates {
        cand.centers = cand
            .centers
            .iter()
            .map(|c| {
                let mut lifted = vec![0.0; features];
                for (i, &w) in c.iter().enumerate() {
                    for (l, r) in lifted.iter_mut().zip(svd.right(i)) {
                        *l += w * r;
                    }
                }
                lifted
            })
            .collect();
    }
    let chosen = &candidates[best];
    Ok(PartitionResult {
        labels: chosen.labels(n),
        chosen_gamma: chosen.gamma_j,
        chosen_index: best + 1,
        score: chosen.score,
        all_candidates: keep.then_some(candidates),
    })
}

/// Distance between a labeling and the truth, minimized over relabelings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Misclassification {
    /// `Σ_i |V_i Δ S_σ(i)|`; every misplaced individual counts twice.
    pub raw: usize,
    /// `raw / n`.
    pub rate: f64,
    /// Individuals that agree with the truth under the best relabeling.
    pub overlap: usize,
}

/// Compares `labels` with `truth`, both with values below `k`. Exhaustive
/// over permutations for `k ≤ 6`, optimal assignment otherwise.
pub fn misclassification(labels: &[usize], truth: &[usize], k: usize) -> Result<Misclassification> {
    if labels.len() != truth.len() || labels.is_empty() {
        return Err(Error::InvalidInput(format!(
            "labelings have lengths {} and {}",
            labels.len(),
            truth.len()
        )));
    }
    if k == 0 || labels.iter().chain(truth).any(|&l| l >= k) {
        return Err(Error::InvalidInput(format!("labels must lie in 0..{k}")));
    }
    let mut confusion = vec![vec![0usize; k]; k];
    for (&l, &t) in labels.iter().zip(truth) {
        confusion[t][l] += 1;
    }
    let overlap = if k <= 6 {
        best_by_permutation(&confusion)
    } else {
        best_by_assignment(&confusion)
    };
    let n = labels.len();
    let raw = 2 * (n - overlap);
    Ok(Misclassification {
        raw,
        rate: raw as f64 / n as f64,
        overlap,
    })
}

fn best_by_permutation(confusion: &[Vec<usize>]) -> usize {
    fn go(row: usize, used: &mut [bool], confusion: &[Vec<usize>]) -> usize {
        if row == confusion.len() {
            return 0;
        }
        let mut best = 0;
        for col in 0..confusion.len() {
            if !used[col] {
                used[col] = true;
                best = best.max(confusion[row][col] + go(row + 1, used, confusion));
                used[col] = false;
            }
        }
        best
    }
    go(0, &mut vec![false; confusion.len()], confusion)
}

/// Hungarian method on `max − confusion`.
fn best_by_assignment(confusion: &[Vec<usize>]) -> usize {
    let k = confusion.len();
    let top = confusion.iter().flatten().copied().max().unwrap_or(0) as i64;
    let cost = |i: usize, j: usize| top - confusion[i - 1][j - 1] as i64;
    let mut u = vec![0i64; k + 1];
    let mut v = vec![0i64; k + 1];
    let mut p = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for i in 1..=k {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=k {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=k).map(|j| confusion[p[j] - 1][j - 1]).sum()
}
