#![allow(dead_code, clippy::needless_range_loop)]

use specmix::linalg::Matrix;
use specmix::popmodel::{random_model, PopulationModel};

/// Cyclic Jacobi eigensolver for small symmetric matrices. Written
/// independently of the library's tridiagonal QL solver so that the two can
/// check each other. Returns eigenvalues in descending order and the matching
/// eigenvectors as columns.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[i][j] * m[i][j];
                }
            }
        }
        let scale: f64 = (0..n).map(|i| m[i][i] * m[i][i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].total_cmp(&m[i][i]));
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&c| (0..n).map(|r| v[r][c]).collect())
        .collect();
    (values, vectors)
}

/// `m·mᵀ` as nested vectors.
pub fn row_gram(m: &Matrix) -> Vec<Vec<f64>> {
    let n = m.rows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| m.row(i).iter().zip(m.row(j)).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect()
}

/// `mᵀ·m` as nested vectors.
pub fn col_gram(m: &Matrix) -> Vec<Vec<f64>> {
    row_gram(&m.transpose())
}

/// Singular values of `m` from the Jacobi eigenvalues of its smaller Gram matrix.
pub fn reference_singular_values(m: &Matrix) -> Vec<f64> {
    let g = if m.rows() <= m.cols() {
        row_gram(m)
    } else {
        col_gram(m)
    };
    jacobi_eigen(&g)
        .0
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect()
}

/// Small deterministic generator for test inputs that do not go through the
/// library's RNG.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn uniform(&mut self) -> f64 {
        self.next_u64() as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() as usize) % (hi - lo + 1)
    }
}

/// Random two-population model with `N_t ≤ max_n`, `K ≤ max_k` and a random spread.
pub fn random_two_population(rng: &mut Lcg, max_n: usize, max_k: usize) -> PopulationModel {
    let n1 = rng.range(1, max_n);
    let n2 = rng.range(1, max_n);
    let k = rng.range(2, max_k);
    let spread = 0.02 + 0.48 * rng.uniform();
    random_model(2, k, vec![n1, n2], spread, rng.next_u64()).unwrap()
}

pub fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
