use specmix::harness::{
    render_svg, run_experiment, summarize, write_records, ExperimentConfig, ExperimentRecord,
    SummaryRow,
};

fn record(rate: f64) -> ExperimentRecord {
    ExperimentRecord {
        method: "classify",
        alpha: 0.1,
        gamma: 0.01,
        features: 100,
        n_per_population: 10,
        trial: 0,
        seed: 0,
        success_rate: Some(rate),
        raw_misclassification: Some(((1.0 - rate) * 40.0).round() as usize),
        s1: None,
        s2: None,
        used_vector: String::new(),
        wall_time: 0.0,
    }
}

#[test]
fn separated_model_gives_perfect_success_for_every_method() {
    let cfg = ExperimentConfig::from_json(
        r#"{"alpha": 1.0, "epsilon": 0.0, "K": [40], "N": [4],
            "methods": ["classify", "classify-best-vector", "partition", "oracle", "maxcut"],
            "trials": 1, "rounds": 2}"#,
    )
    .unwrap();
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records.len(), 5);
    for r in &records {
        assert_eq!(r.success_rate, Some(1.0), "{}: {}", r.method, r.used_vector);
    }
}

#[test]
fn success_and_misclassification_rates_sum_to_one() {
    let cfg = ExperimentConfig::from_json(
        r#"{"alpha": 0.1, "K": [100], "N": [10, 30],
            "methods": ["classify-best-vector", "partition", "oracle"], "trials": 4}"#,
    )
    .unwrap();
    for r in run_experiment(&cfg).unwrap() {
        let s = r.success_rate.unwrap();
        assert!((0.0..=1.0).contains(&s));
        assert!((s + r.misclassification_rate().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn parallel_and_serial_runs_agree() {
    let cfg = ExperimentConfig::from_json(
        r#"{"alpha": 0.2, "K": [60, 80], "N": [6, 12],
            "methods": ["classify", "oracle"], "trials": 3, "rounds": 2}"#,
    )
    .unwrap();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_experiment(&cfg).unwrap());
    let parallel = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run_experiment(&cfg).unwrap());
    assert_eq!(serial, parallel);
    let order: Vec<(usize, usize, usize)> = serial
        .iter()
        .map(|r| (r.features, r.n_per_population, r.trial))
        .collect();
    let mut sorted = order.clone();
    sorted.sort();
    assert_eq!(order, sorted);
}

#[test]
fn failed_trials_are_recorded() {
    let cfg = ExperimentConfig::from_json(
        r#"{"alpha": 0.2, "K": [40], "N": [10], "methods": ["maxcut", "oracle"], "trials": 2}"#,
    )
    .unwrap();
    let records = run_experiment(&cfg).unwrap();
    let cut: Vec<_> = records.iter().filter(|r| r.method == "maxcut").collect();
    assert!(cut
        .iter()
        .all(|r| r.failed() && r.used_vector.starts_with("error")));
    assert!(records
        .iter()
        .filter(|r| r.method == "oracle")
        .all(|r| !r.failed()));
    let summary = summarize(&records).unwrap();
    let row = summary.iter().find(|r| r.method == "maxcut").unwrap();
    assert_eq!(row.failures, 2);
    assert!(row.mean_success.is_nan());
}

#[test]
fn record_csv_columns() {
    let mut buf = Vec::new();
    write_records(&[record(0.5)], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with(
        "method,alpha,gamma,K,N,trial,seed,success_rate,raw_misclassification,s1,s2,used_vector,wall_time\n"
    ));
}

#[test]
fn summary_examples() {
    let one = summarize(&[record(0.7)]).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].mean_success, 0.7);
    assert_eq!(one[0].std_success, 0.0);
    let two = summarize(&[record(0.4), record(0.6)]).unwrap();
    assert!((two[0].mean_success - 0.5).abs() < 1e-15);
    assert!(summarize(&[]).is_err());
}

#[test]
fn summary_of_fair_coin_indicators() {
    let mut state = 99u64;
    let records: Vec<ExperimentRecord> = (0..100)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            record(if state >> 63 == 1 { 1.0 } else { 0.0 })
        })
        .collect();
    let mean = summarize(&records).unwrap()[0].mean_success;
    assert!((mean - 0.5).abs() <= 0.15, "{mean}");
}

#[test]
fn summary_order_is_method_then_k_then_n() {
    let mut rs = Vec::new();
    for (m, k, n) in [
        ("partition", 200, 5),
        ("classify", 400, 5),
        ("classify", 200, 50),
        ("classify", 200, 5),
    ] {
        let mut r = record(1.0);
        r.method = m;
        r.features = k;
        r.n_per_population = n;
        rs.push(r);
    }
    let keys: Vec<(String, usize, usize)> = summarize(&rs)
        .unwrap()
        .into_iter()
        .map(|r| (r.method, r.features, r.n_per_population))
        .collect();
    assert_eq!(
        keys,
        vec![
            ("classify".into(), 200, 5),
            ("classify".into(), 200, 50),
            ("classify".into(), 400, 5),
            ("partition".into(), 200, 5)
        ]
    );
}

fn row(method: &str, k: usize, n: usize, mean: f64) -> SummaryRow {
    SummaryRow {
        method: method.into(),
        alpha: 0.04,
        gamma: 0.0016,
        features: k,
        n_per_population: n,
        trials: 1,
        failures: 0,
        mean_success: mean,
        std_success: 0.0,
    }
}

#[test]
fn one_curve_with_two_points() {
    let svg = render_svg(&[
        row("classify-best-vector", 200, 100, 0.55),
        row("classify-best-vector", 200, 400, 0.6),
    ])
    .unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
    let start = svg.find("points=\"").unwrap() + 8;
    let end = start + svg[start..].find('"').unwrap();
    assert_eq!(svg[start..end].split(' ').count(), 2);
}

#[test]
fn oracle_curves_are_dashed_and_markers_drawn() {
    let rows = vec![
        row("classify", 5000, 25, 0.6),
        row("classify", 5000, 800, 0.99),
        row("oracle", 5000, 25, 0.9),
        row("oracle", 5000, 800, 0.9),
    ];
    let svg = render_svg(&rows).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert_eq!(svg.matches("stroke-dasharray=\"6,4\" points").count(), 1);
    // 1/(γ²K) = 78.1 lies inside [25, 800].
    assert_eq!(svg.matches("class=\"marker\"").count(), 1);
}

#[test]
fn empty_summary_is_rejected() {
    assert!(render_svg(&[]).is_err());
    assert!(render_svg(&[row("classify", 200, 10, f64::NAN)]).is_err());
    let dir = tempfile::tempdir().unwrap();
    assert!(
        specmix::harness::emit_plot(&[], &dir.path().join("a.svg"), &dir.path().join("a.csv"))
            .is_err()
    );
}

#[test]
fn unwritable_plot_path_is_an_io_error() {
    let rows = [row("classify", 200, 10, 0.5)];
    let err = specmix::harness::emit_plot(
        &rows,
        std::path::Path::new("/nonexistent/dir/plot.svg"),
        std::path::Path::new("/nonexistent/dir/plot.csv"),
    )
    .unwrap_err();
    assert!(matches!(err, specmix::Error::Io { .. }));
}
