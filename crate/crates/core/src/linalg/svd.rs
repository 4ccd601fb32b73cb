//! Truncated singular value decomposition for dense matrices.
//!
//! The smaller Gram matrix (`m m^T` when `n <= K`, `m^T m` otherwise) is
//! diagonalized by orthogonal block iteration with a Rayleigh–Ritz step per
//! sweep; the vectors on the other side are recovered by one multiplication
//! with `m` and a division by the singular value.

use rand::Rng;
use serde::Serialize;

use super::matrix::{axpy, dot, norm2};
use super::symmetric::symmetric_eigen;
use super::Matrix;
use crate::error::{Error, Result};
use crate::rng::Substream;

/// Default convergence tolerance, relative to the largest singular value.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Singular values at or below this fraction of `σ₁` are flagged degenerate.
pub const DEGENERATE_RATIO: f64 = 1e-12;

const START_SEED: u64 = 0x0005_EED0_F5BD;

/// One singular value with its unit left and right vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularTriplet {
    pub sigma: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    /// Set when `sigma` is numerically zero; the vector on the recovered side
    /// is then an arbitrary unit vector orthogonal to the earlier ones.
    pub degenerate: bool,
}

/// The leading singular triplets of a matrix, in descending order of `sigma`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub triplets: Vec<SingularTriplet>,
    /// Largest of `‖mᵀu − σv‖` and `‖mv − σu‖` over the returned triplets.
    pub residual_norm: f64,
    pub iterations: usize,
}

impl SpectralSummary {
    pub fn sigmas(&self) -> Vec<f64> {
        self.triplets.iter().map(|t| t.sigma).collect()
    }

    pub fn sigma(&self, i: usize) -> f64 {
        self.triplets[i].sigma
    }

    pub fn left(&self, i: usize) -> &[f64] {
        &self.triplets[i].left
    }

    pub fn right(&self, i: usize) -> &[f64] {
        &self.triplets[i].right
    }
}

/// Returns the `k` largest singular triplets of `m`.
///
/// Every triplet satisfies `‖mᵀu − σv‖ ≤ tol·σ₁` and `‖mv − σu‖ ≤ tol·σ₁`,
/// except that `tol` is never tighter than the round-off floor of the Gram
/// matrix (about `ε·√d·σ₁²/σ` for the `d×d` Gram matrix). Left vectors are
/// oriented so their entry of largest magnitude is positive.
pub fn top_k_singular_triplets(m: &Matrix, k: usize, tol: f64) -> Result<SpectralSummary> {
    let (n, cols) = m.shape();
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    if k == 0 || k > n.min(cols) {
        return Err(Error::InvalidInput(format!(
            "k = {k} must lie in 1..={} for a {n}x{cols} matrix",
            n.min(cols)
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let wide = n <= cols;
    let gram = if wide { m.gram_rows() } else { m.gram_cols() };
    let eig = top_eigenpairs(&gram, k, tol)?;

    // Vectors from the Gram side, and their images on the other side.
    let mut triplets: Vec<SingularTriplet> = Vec::with_capacity(k);
    let mut sigma_max = 0.0f64;
    let mut images = Vec::with_capacity(k);
    for q in &eig.vectors {
        let w = if wide { m.tmul_vec(q) } else { m.mul_vec(q) };
        let sigma = norm2(&w);
        sigma_max = sigma_max.max(sigma);
        images.push((q.clone(), w, sigma));
    }
    images.sort_by(|a, b| b.2.total_cmp(&a.2));

    let other_len = if wide { cols } else { n };
    let mut others: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (q, w, sigma) in images {
        let degenerate = sigma <= DEGENERATE_RATIO * sigma_max || sigma == 0.0;
        let other = if degenerate {
            orthogonal_unit_vector(other_len, &others)
        } else {
            let mut o: Vec<f64> = w.iter().map(|x| x / sigma).collect();
            for prev in &others {
                let c = dot(&o, prev);
                axpy(-c, prev, &mut o);
            }
            let nrm = norm2(&o);
            o.iter_mut().for_each(|x| *x /= nrm);
            o
        };
        others.push(other.clone());
        let (mut left, mut right) = if wide { (q, other) } else { (other, q) };
        if leading_entry_negative(&left) {
            left.iter_mut().for_each(|x| *x = -*x);
            right.iter_mut().for_each(|x| *x = -*x);
        }
        triplets.push(SingularTriplet {
            sigma,
            left,
            right,
            degenerate,
        });
    }

    let residual_norm = triplets
        .iter()
        .map(|t| triplet_residual(m, t))
        .fold(0.0, f64::max);

    Ok(SpectralSummary {
        triplets,
        residual_norm,
        iterations: eig.iterations,
    })
}

/// `max(‖mᵀu − σv‖, ‖mv − σu‖)` for one triplet.
pub fn triplet_residual(m: &Matrix, t: &SingularTriplet) -> f64 {
    let mtu = m.tmul_vec(&t.left);
    let mv = m.mul_vec(&t.right);
    let r1 = mtu
        .iter()
        .zip(&t.right)
        .map(|(a, b)| (a - t.sigma * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let r2 = mv
        .iter()
        .zip(&t.left)
        .map(|(a, b)| (a - t.sigma * b).powi(2))
        .sum::<f64>()
        .sqrt();
    r1.max(r2)
}

/// Best rank-`k` approximation `Σ_{i≤k} σᵢ uᵢ vᵢᵀ`.
pub fn rank_k_approximation(m: &Matrix, k: usize) -> Result<Matrix> {
    let svd = top_k_singular_triplets(m, k, DEFAULT_TOL)?;
    Ok(reconstruct(&svd, m.rows(), m.cols()))
}

/// Sums `σᵢ uᵢ vᵢᵀ` over the triplets of `svd`.
pub fn reconstruct(svd: &SpectralSummary, rows: usize, cols: usize) -> Matrix {
    let mut out = Matrix::zeros(rows, cols);
    for t in &svd.triplets {
        if t.sigma == 0.0 {
            continue;
        }
        for i in 0..rows {
            let c = t.sigma * t.left[i];
            if c != 0.0 {
                axpy(c, &t.right, out.row_mut(i));
            }
        }
    }
    out
}

/// Euclidean operator norm `σ₁(m)`.
pub fn operator_norm(m: &Matrix) -> Result<f64> {
    Ok(top_k_singular_triplets(m, 1, DEFAULT_TOL)?.sigma(0))
}

pub fn frobenius_norm(m: &Matrix) -> f64 {
    norm2(m.as_slice())
}

fn leading_entry_negative(v: &[f64]) -> bool {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    v.get(best).is_some_and(|&x| x < 0.0)
}

/// First standard basis vector that survives projection against `previous`,
/// normalized.
fn orthogonal_unit_vector(len: usize, previous: &[Vec<f64>]) -> Vec<f64> {
    for j in 0..len {
        let mut e = vec![0.0; len];
        e[j] = 1.0;
        for _ in 0..2 {
            for p in previous {
                let c = dot(&e, p);
                axpy(-c, p, &mut e);
            }
        }
        let nrm = norm2(&e);
        if nrm > 0.5 {
            e.iter_mut().for_each(|x| *x /= nrm);
            return e;
        }
    }
    unreachable!("fewer previous vectors than dimensions")
}

struct Eigenpairs {
    vectors: Vec<Vec<f64>>,
    iterations: usize,
}

fn block_size(d: usize, k: usize) -> usize {
    d.min(k + k.max(10))
}

/// Leading `k` eigenpairs of the positive semidefinite matrix `g`.
fn top_eigenpairs(g: &Matrix, k: usize, tol: f64) -> Result<Eigenpairs> {
    let d = g.rows();
    let p = block_size(d, k);
    let cap = 10 * d * ((1.0 / tol).ln().ceil().max(1.0) as usize);
    let floor_factor = 64.0 * f64::EPSILON * (d as f64).sqrt();

    let mut rng = Substream::new(START_SEED).rng();
    let mut basis: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    orthonormalize(&mut basis, &mut rng);

    let mut worst = f64::INFINITY;
    for iteration in 1..=cap {
        let images: Vec<Vec<f64>> = basis.iter().map(|q| g.mul_vec(q)).collect();
        let projected = Matrix::from_fn(p, p, |i, j| {
            0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i]))
        });
        let small = symmetric_eigen(&projected)?;

        let ritz: Vec<Vec<f64>> = (0..p).map(|c| combine(&basis, &small.vectors, c)).collect();
        let ritz_images: Vec<Vec<f64>> = (0..p)
            .map(|c| combine(&images, &small.vectors, c))
            .collect();

        let top = small.values[0].max(0.0);
        let floor = floor_factor * top;
        worst = 0.0;
        let mut converged = true;
        for i in 0..k {
            let theta = small.values[i];
            let r = ritz_images[i]
                .iter()
                .zip(&ritz[i])
                .map(|(a, b)| (a - theta * b).powi(2))
                .sum::<f64>()
                .sqrt();
            let target = (tol * (top * theta.max(0.0)).sqrt()).max(floor);
            if r > target {
                converged = false;
            }
            if top > 0.0 {
                worst = worst.max(r / top);
            }
        }
        if converged {
            return Ok(Eigenpairs {
                vectors: ritz.into_iter().take(k).collect(),
                iterations: iteration,
            });
        }
        basis = ritz_images;
        orthonormalize(&mut basis, &mut rng);
    }
    Err(Error::ConvergenceFailure {
        iterations: cap,
        residual: worst,
    })
}

/// Column `c` of `vectors · coeffs`, where `vectors` holds the columns.
fn combine(vectors: &[Vec<f64>], coeffs: &Matrix, c: usize) -> Vec<f64> {
    let mut out = vec![0.0; vectors[0].len()];
    for (j, v) in vectors.iter().enumerate() {
        let w = coeffs[(j, c)];
        if w != 0.0 {
            axpy(w, v, &mut out);
        }
    }
    out
}

/// Modified Gram–Schmidt with one re-orthogonalization pass. Columns that
/// collapse are replaced by fresh random directions.
fn orthonormalize(basis: &mut [Vec<f64>], rng: &mut impl Rng) {
    for i in 0..basis.len() {
        let mut attempts = 0;
        loop {
            let original = norm2(&basis[i]);
            for _ in 0..2 {
                for j in 0..i {
                    let c = dot(&basis[i], &basis[j]);
                    let (head, tail) = basis.split_at_mut(i);
                    axpy(-c, &head[j], &mut tail[0]);
                }
            }
            let nrm = norm2(&basis[i]);
            if nrm > 1e-10 * original && nrm > 0.0 {
                basis[i].iter_mut().for_each(|x| *x /= nrm);
                break;
            }
            attempts += 1;
            assert!(attempts < 16, "could not complete an orthonormal basis");
            let len = basis[i].len();
            basis[i] = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        }
    }
}
