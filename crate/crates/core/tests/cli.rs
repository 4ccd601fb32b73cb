use std::path::Path;
use std::process::{Command, Output};

fn specmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specmix"))
        .args(args)
        .output()
        .unwrap()
}

fn write(path: &Path, text: &str) -> String {
    std::fs::write(path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_classify_partition_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        &dir.path().join("model.json"),
        r#"{"k": 2, "K": 2000, "probs": {"alpha": 0.3}, "sizes": [30, 30]}"#,
    );
    let sample = dir.path().join("sample.csv");
    let out = specmix(&[
        "gen",
        "--config",
        &model,
        "--seed",
        "4",
        "--out",
        sample.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let labels = dir.path().join("labels.csv");
    let out = specmix(&[
        "classify",
        "--input",
        sample.to_str().unwrap(),
        "--gamma",
        "0.09",
        "--rounds",
        "3",
        "--out",
        labels.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("success rate 1.0000"));
    let text = std::fs::read_to_string(&labels).unwrap();
    assert!(text.starts_with("individual,label\n"));
    assert_eq!(text.lines().count(), 61);

    let out = specmix(&["partition", "--input", sample.to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("misclassification rate 0.0000"));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 61);
}

#[test]
fn verify_writes_passing_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        &dir.path().join("model.json"),
        r#"{"k": 2, "K": 400, "probs": {"alpha": 0.2}, "sizes": [40, 40]}"#,
    );
    let out = specmix(&["verify", "--config", &model, "--trials", "2"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_pass"], true);
    assert_eq!(report["trials"].as_array().unwrap().len(), 2);
    assert!(report["separation_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn experiment_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir.path().join("cfg.json"),
        r#"{"alpha": 0.2, "K": [100], "N": [10], "methods": ["classify-best-vector", "oracle"]}"#,
    );
    let out_dir = dir.path().join("out");
    let out = specmix(&[
        "experiment",
        "--config",
        &cfg,
        "--trials",
        "2",
        "--seed",
        "3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in ["records.csv", "summary.csv", "plot.svg", "plot_points.csv"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let records = std::fs::read_to_string(out_dir.join("records.csv")).unwrap();
    assert_eq!(records.lines().count(), 5);
}

#[test]
fn invalid_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir.path().join("bad.json"), r#"{"k": 2, "K": 3"#);
    assert_eq!(specmix(&["gen", "--config", &bad]).status.code(), Some(1));
    assert_eq!(
        specmix(&["gen", "--config", "/does/not/exist.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(specmix(&["frobnicate"]).status.code(), Some(1));
    let csv = write(&dir.path().join("s.csv"), "f0,f1\n0,1\n1,0\n");
    assert_eq!(
        specmix(&["partition", "--input", &csv, "--k", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(specmix(&["--help"]).status.code(), Some(0));
}
