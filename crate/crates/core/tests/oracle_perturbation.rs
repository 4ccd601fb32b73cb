use specmix::oracle::{
    constants::NOISE_NORM_RATIO_MAX, expected_matrix, max_weight_balanced_cut, oracle_classifier,
    verify_perturbation_bounds,
};
use specmix::popmodel::{normalize, sample, two_block_model, PopulationModel, SampleMatrix};

#[test]
fn zero_perturbation_has_zero_distance() {
    let model = two_block_model(0.2, 0.02, 200, 15).unwrap();
    let x =
        SampleMatrix::from_normalized(expected_matrix(&model, true), Some(model.labels())).unwrap();
    let r = verify_perturbation_bounds(&x, &model).unwrap();
    assert!(r.all_pass);
    for name in ["sin_theta_u1", "sin_theta_u2", "weyl_s1", "weyl_s2"] {
        assert!(r.get(name).unwrap().measured < 1e-9, "{name}");
    }
}

#[test]
fn bounds_hold_on_sampled_instances() {
    let model = two_block_model(0.2, 0.02, 2000, 200).unwrap();
    for seed in 0..20 {
        let x = normalize(&sample(&model, seed)).unwrap();
        let r = verify_perturbation_bounds(&x, &model).unwrap();
        let failures: Vec<_> = r.failures().collect();
        assert!(failures.is_empty(), "seed {seed}: {failures:?}");
    }
}

#[test]
fn noise_norm_calibration_across_draws() {
    let model = two_block_model(0.1, 0.01, 600, 50).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let x = normalize(&sample(&model, 500 + seed)).unwrap();
        let r = verify_perturbation_bounds(&x, &model).unwrap();
        worst = worst.max(r.get("noise_norm_over_sqrt_k").unwrap().measured);
    }
    println!("max s1(X - EX)/sqrt(K) over 100 draws: {worst:.3}");
    assert!(worst <= NOISE_NORM_RATIO_MAX);
}

#[test]
fn raw_input_is_rejected() {
    let model = two_block_model(0.2, 0.02, 20, 3).unwrap();
    assert!(verify_perturbation_bounds(&sample(&model, 0), &model).is_err());
}

#[test]
fn oracle_beats_chance_and_is_near_perfect_when_easy() {
    let easy = two_block_model(0.3, 0.03, 2000, 30).unwrap();
    let s = sample(&easy, 1);
    assert_eq!(oracle_classifier(&easy, &s).unwrap(), easy.labels());
    let degenerate =
        PopulationModel::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![2, 2]).unwrap();
    let s = sample(&degenerate, 1);
    assert_eq!(
        oracle_classifier(&degenerate, &s).unwrap(),
        vec![0, 0, 1, 1]
    );
}

#[test]
fn max_cut_on_separated_groups() {
    let model = two_block_model(0.9, 0.0, 60, 5).unwrap();
    let s = sample(&model, 2);
    let cut = max_weight_balanced_cut(&s).unwrap();
    assert_eq!(cut, model.labels());
}
