mod common;

use common::{jacobi_eigen, random_two_population, row_gram, Lcg};
use specmix::oracle::{
    compute_abc, expected_matrix, static_property_checks, static_spectrum,
    verify_separation_identity, StaticMoments,
};
use specmix::popmodel::{divergence_of_rows, two_block_model};

#[test]
fn jacobi_oracle_sanity() {
    let (vals, vecs) = jacobi_eigen(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
    assert!((vals[0] - 3.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    assert!((vecs[0][0].abs() - 0.5f64.sqrt()).abs() < 1e-14);
}

#[test]
fn closed_form_matches_explicit_gram_eigenpairs() {
    let mut rng = Lcg(17);
    for _ in 0..40 {
        let model = random_two_population(&mut rng, 12, 60);
        let m = StaticMoments::from_model(&model, true).unwrap();
        let s = static_spectrum(&m).unwrap();
        let h = row_gram(&expected_matrix(&model, true));
        let (vals, vecs) = jacobi_eigen(&h);
        let scale = vals[0];
        assert!((vals[0] - s.lambda1_h).abs() <= 1e-9 * scale);
        assert!((vals[1] - s.lambda2_h).abs() <= 1e-9 * scale);
        assert!(
            (s.lambda1_h + s.lambda2_h - (m.n1 as f64 * m.a + m.n2 as f64 * m.c)).abs()
                <= 1e-8 * scale
        );
        let product = (m.n1 * m.n2) as f64 * (m.a * m.c - m.b * m.b);
        assert!((s.lambda1_h * s.lambda2_h - product).abs() <= 1e-8 * scale * scale);
        let labels = model.labels();
        for (i, lambda) in [(1, s.lambda1_h), (2, s.lambda2_h)] {
            let u = s.left_vector(i, &labels);
            let hu: Vec<f64> = h
                .iter()
                .map(|r| r.iter().zip(&u).map(|(a, b)| a * b).sum())
                .collect();
            for (a, b) in hu.iter().zip(&u) {
                assert!((a - lambda * b).abs() <= 1e-8 * scale);
            }
            let unit: f64 = u.iter().map(|x| x * x).sum();
            assert!((unit - 1.0).abs() < 1e-12);
            if i == 1 {
                let dot: f64 = u.iter().zip(&vecs[0]).map(|(a, b)| a * b).sum();
                assert!((dot.abs() - 1.0).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn separation_identity_on_two_block_model() {
    let model = two_block_model(0.04, 0.004, 1000, 100).unwrap();
    let m = StaticMoments::from_model(&model, true).unwrap();
    let s = static_spectrum(&m).unwrap();
    let gamma = divergence_of_rows(&[m.mu1.clone(), m.mu2.clone()]);
    assert!(verify_separation_identity(&m, &s, gamma) <= 1e-8);
}

#[test]
fn moment_example_spectrum() {
    let m = compute_abc(&[1.0, 0.5], &[0.5, 1.0], 1, 1).unwrap();
    let s = static_spectrum(&m).unwrap();
    let (vals, _) = jacobi_eigen(&[vec![1.25, 1.0], vec![1.0, 1.25]]);
    assert!((s.lambda1_h - vals[0]).abs() < 1e-14);
    assert!((s.lambda2_h - vals[1]).abs() < 1e-14);
}

#[test]
fn static_inequalities_on_random_normalized_models() {
    let mut rng = Lcg(2024);
    let mut failures: std::collections::BTreeMap<String, usize> = Default::default();
    for _ in 0..500 {
        let model = random_two_population(&mut rng, 50, 500);
        let m = StaticMoments::from_model(&model, true).unwrap();
        let s = static_spectrum(&m).unwrap();
        for c in static_property_checks(&m, &s) {
            if !c.pass {
                *failures.entry(c.name).or_default() += 1;
            }
        }
    }
    println!("static inequality failures over 500 models: {failures:?}");
    assert!(failures.is_empty(), "{failures:?}");
}
