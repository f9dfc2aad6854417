//! End-to-end checks of the batch interface: output files, report schema,
//! chart determinism, and the time-rescaling invariance.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str], dir: &Path) -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_floqcert"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "floqcert {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = std::fs::read_to_string(dir.join("report.json")).expect("report.json written");
    serde_json::from_str(&report).expect("report.json parses")
}

#[test]
fn solve_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"problem": "linear_forced", "n": 8, "tol": 1e-9}"#,
    )
    .unwrap();
    let report = run(
        &["solve", "--config", cfg.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(report["command"], "solve");
    // The doubling loop must have raised N past 8 to reach 1e-9.
    let n_used = report["n_used"].as_u64().unwrap();
    assert!(n_used > 8, "n_used {n_used}");
    assert!(report["err_sup"].as_f64().unwrap() < 1e-9);
    assert!(report["config"]["problem"] == "linear_forced");

    let csv = std::fs::read_to_string(dir.path().join("solution.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,re_y0,im_y0");
    assert_eq!(csv.lines().count(), n_used as usize + 2);
    // Nodes descend from 1 to -1.
    let first: f64 = csv.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert_eq!(first, 1.0);
}

#[test]
fn certify_scalar_constant_stable_case() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"problem": "scalar_constant", "params": {"a0": -1.0, "b0": -0.5}, "n": 48}"#,
    )
    .unwrap();
    let report = run(&["certify", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(report["verdict"], "stable");
    assert!((report["lambda1_abs"].as_f64().unwrap() - 0.4227484).abs() < 1e-5);
    // Full ledger and provenance tags are embedded.
    assert!(report["omegas"].as_array().unwrap().len() == 48);
    assert!(report["nus"].as_array().unwrap().len() == 49);
    assert!(report["ellipse_data"]["provenance"]
        .as_str()
        .unwrap()
        .contains("rigorous"));
    assert!(report["config"]["delta"].as_f64().unwrap() > 0.0);
    assert_eq!(report["version"].as_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn certify_boundary_case_is_not_proven_stable() {
    // B = 0, a = 0: lambda_1 = 1 exactly, so |lambda_1| + radius >= 1.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"problem": "scalar_constant", "params": {"a0": 0.0, "b0": 0.0}, "n": 24}"#,
    )
    .unwrap();
    let report = run(&["certify", "--config", cfg.to_str().unwrap()], dir.path());
    assert!((report["lambda1_abs"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(report["verdict"], "not-stable");
}

#[test]
fn bound_reports_history() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"problem": "mathieu_stiff"}"#).unwrap();
    let report = run(&["bound", "--config", cfg.to_str().unwrap()], dir.path());
    let history = report["bound"]["history"].as_array().unwrap();
    assert!(history.len() >= 3);
    let final_value = report["bound"]["value"].as_f64().unwrap();
    assert!((final_value - 19.587).abs() < 0.4, "{final_value}");
    assert!(report["bound"]["provenance"]
        .as_str()
        .unwrap()
        .starts_with("bootstrap"));
}

#[test]
fn chart_outputs_are_deterministic() {
    let cfg_text = r#"{
        "problem": "scalar_constant",
        "n": 16,
        "chart": {"x_range": [-1.0, 1.0], "y_range": [-1.0, 1.0], "resolution": [21, 17]}
    }"#;
    let mut artifacts = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, cfg_text).unwrap();
        let report = run(
            &["chart", "--config", cfg.to_str().unwrap(), "--workers", "3"],
            dir.path(),
        );
        assert_eq!(report["pixels"].as_u64().unwrap(), 21 * 17);
        assert_eq!(report["failures"].as_u64().unwrap(), 0);
        let csv = std::fs::read(dir.path().join("chart.csv")).unwrap();
        let pgm = std::fs::read(dir.path().join("chart.pgm")).unwrap();
        artifacts.push((csv, pgm));
    }
    assert_eq!(artifacts[0].0, artifacts[1].0, "chart.csv not deterministic");
    assert_eq!(artifacts[0].1, artifacts[1].1, "chart.pgm not deterministic");

    let (csv, pgm) = &artifacts[0];
    let text = String::from_utf8_lossy(csv);
    assert!(text.starts_with("x,y,rho\n"));
    assert_eq!(text.lines().count(), 1 + 21 * 17);
    assert!(pgm.starts_with(b"P5\n21 17\n255\n"));
    assert_eq!(pgm.len(), "P5\n21 17\n255\n".len() + 21 * 17);

    // rho = 1 exactly at (a0, b0) = (0, 0): that pixel sits on the grid.
    let row = text
        .lines()
        .find(|l| l.starts_with("0.000000000000e0,0.000000000000e0"))
        .expect("origin pixel present");
    let rho: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((rho - 1.0).abs() < 1e-10, "origin rho {rho}");
}

#[test]
fn rescaling_invariance() {
    // scalar_constant with period T equals the pre-rescaled problem with the
    // coefficients multiplied by T/2.
    let dir1 = tempfile::tempdir().unwrap();
    let cfg1 = dir1.path().join("cfg.json");
    std::fs::write(
        &cfg1,
        r#"{"problem": "scalar_constant", "params": {"a0": -1.0, "b0": -0.5}, "period": 4.0, "n": 48}"#,
    )
    .unwrap();
    let r1 = run(&["certify", "--config", cfg1.to_str().unwrap()], dir1.path());

    let dir2 = tempfile::tempdir().unwrap();
    let cfg2 = dir2.path().join("cfg.json");
    std::fs::write(
        &cfg2,
        r#"{"problem": "scalar_constant", "params": {"a0": -2.0, "b0": -1.0}, "n": 48}"#,
    )
    .unwrap();
    let r2 = run(&["certify", "--config", cfg2.to_str().unwrap()], dir2.path());

    let e1 = r1["eigenvalues"].as_array().unwrap();
    let e2 = r2["eigenvalues"].as_array().unwrap();
    assert_eq!(e1.len(), e2.len());
    for (a, b) in e1.iter().zip(e2.iter()).take(8) {
        let da = (a["re"].as_f64().unwrap() - b["re"].as_f64().unwrap()).abs();
        let db = (a["im"].as_f64().unwrap() - b["im"].as_f64().unwrap()).abs();
        assert!(da < 1e-10 && db < 1e-10, "eigenvalue mismatch {a} vs {b}");
    }
}

#[test]
fn unknown_problem_fails_with_stage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"problem": "nonexistent"}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_floqcert"))
        .args(["certify", "--config", cfg.to_str().unwrap()])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("stage: config"), "stderr: {err}");
}
