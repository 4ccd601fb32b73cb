use crate::error::{Error, Result};
use crate::popmodel::{PopulationModel, SampleMatrix};

const CLAMP: f64 = 1e-12;

/// Likelihood-ratio classifier that knows the true `p` rows. Labels 0 when
/// population 1 is at least as likely, 1 otherwise.
pub fn oracle_classifier(model: &PopulationModel, s: &SampleMatrix) -> Result<Vec<usize>> {
    if model.populations() != 2 {
        return Err(Error::InvalidParameters(
            "oracle classifier needs two populations".into(),
        ));
    }
    if s.is_normalized() {
        return Err(Error::InvalidState(
            "oracle classifier expects raw 0/1 data".into(),
        ));
    }
    if s.features() != model.features() {
        return Err(Error::InvalidInput(format!(
            "sample has {} features, model {}",
            s.features(),
            model.features()
        )));
    }
    let clamp = |p: f64| p.clamp(CLAMP, 1.0 - CLAMP);
    let (on, off): (Vec<f64>, Vec<f64>) = model
        .row(0)
        .iter()
        .zip(model.row(1))
        .map(|(&p1, &p2)| {
            let (p1, p2) = (clamp(p1), clamp(p2));
            ((p1 / p2).ln(), ((1.0 - p1) / (1.0 - p2)).ln())
        })
        .unzip();
    Ok((0..s.individuals())
        .map(|r| {
            let llr: f64 = s
                .data()
                .row(r)
                .iter()
                .enumerate()
                .map(|(i, &b)| if b == 1.0 { on[i] } else { off[i] })
                .sum();
            usize::from(llr < 0.0)
        })
        .collect())
}

/// Largest individual count accepted by [`max_weight_balanced_cut`].
pub const MAX_CUT_INDIVIDUALS: usize = 16;

/// Exhaustive search for the balanced bipartition that maximizes the total
/// Hamming distance across the cut. Individual 0 is always labeled 0; ties
/// go to the first cut in lexicographic bitmask order.
pub fn max_weight_balanced_cut(s: &SampleMatrix) -> Result<Vec<usize>> {
    let n = s.individuals();
    if n > MAX_CUT_INDIVIDUALS {
        return Err(Error::SizeLimit(format!(
            "brute-force cut supports at most {MAX_CUT_INDIVIDUALS} individuals, got {n}"
        )));
    }
    if n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "need an even number of individuals, got {n}"
        )));
    }
    let data = s.data();
    let mut w = vec![0.0; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let h = data
                .row(u)
                .iter()
                .zip(data.row(v))
                .filter(|(a, b)| a != b)
                .count() as f64;
            w[u * n + v] = h;
            w[v * n + u] = h;
        }
    }
    let half = n / 2;
    let mut best = (f64::NEG_INFINITY, 0u32);
    // Bit r set means individual r is on the side of individual 0.
    for mask in 0u32..(1u32 << n) {
        if mask & 1 == 0 || mask.count_ones() as usize != half {
            continue;
        }
        let mut weight = 0.0;
        for u in (0..n).filter(|&u| mask >> u & 1 == 1) {
            for v in (0..n).filter(|&v| mask >> v & 1 == 0) {
                weight += w[u * n + v];
            }
        }
        if weight > best.0 {
            best = (weight, mask);
        }
    }
    Ok((0..n).map(|r| usize::from(best.1 >> r & 1 == 0)).collect())
}
