use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn reslab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reslab"))
        .args(args)
        .current_dir(dir)
        .env("RESLAB_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zero_table_rows_and_rejects_empty() {
    let dir = tempfile::tempdir().unwrap();
    let ok = reslab(&["airy-zeros", "--j-max", "10"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("j,zeta_j,zeta_prime_j"));
    assert!(lines[1].starts_with("1,2.338107410459"));

    let bad = reslab(&["airy-zeros", "--j-max", "0"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    std::fs::write(dir.path().join("c.json"), r#"{"j_max": 0}"#).unwrap();
    let bad = reslab(&["airy-zeros", "--config", "c.json"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(reslab(&["no-such-command"], dir.path()).status.code(), Some(1));
    assert_eq!(reslab(&["bands", "--format", "xml"], dir.path()).status.code(), Some(1));
    assert_eq!(reslab(&["bands", "--config", "missing.json"], dir.path()).status.code(), Some(1));
    std::fs::write(dir.path().join("typo.json"), r#"{"radus": 1.0}"#).unwrap();
    assert_eq!(reslab(&["bands", "--config", "typo.json"], dir.path()).status.code(), Some(1));
}

#[test]
fn non_convex_obstacle_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("flat.json"),
        r#"{"obstacle": {"kind": "explicit", "q_min": 0.0, "q_max": 1.0, "surface_area": 4.0}}"#,
    )
    .unwrap();
    let o = reslab(&["bands", "--config", "flat.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("convex"));
}

#[test]
fn bands_json_carries_constants() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("e.json"), r#"{"obstacle": {"kind": "ellipsoid", "semi_axes": [1.2, 1.0, 0.8]}, "bands": 3}"#)
        .unwrap();
    let o = reslab(&["bands", "--config", "e.json", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &v["constants"];
    assert!(c["kappa"].as_f64().unwrap() < c["k_const"].as_f64().unwrap());
    assert_eq!(v["curves"][0]["edges"].as_array().unwrap().len(), 3);

    let o = reslab(&["bands", "--config", "e.json", "--out", "curves.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("curves.constants.json").exists());
}

#[test]
fn neumann_l0_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let o = reslab(&["sphere-resonances", "--l-max", "5", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let l0: Vec<&Value> = v["records"].as_array().unwrap().iter().filter(|r| r["l"] == 0).collect();
    assert_eq!(l0.len(), 1);
    let lambda = &l0[0]["lambda"];
    assert!(lambda[0].as_f64().unwrap().abs() < 1e-12);
    assert!((lambda[1].as_f64().unwrap() + 1.0).abs() < 1e-12);
    // l roots for each l, with 2l + 1 multiplicity
    let total: u64 = v["records"].as_array().unwrap().iter().map(|r| r["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, (0..=5u64).map(|l| (l + 1) * (2 * l + 1)).sum::<u64>());
}

#[test]
fn upper_half_plane_robin_root_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("r.json"), r#"{"bc": "robin(2.0)"}"#).unwrap();
    let o = reslab(&["sphere-resonances", "--config", "r.json", "--l-max", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let diag: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(diag["error"], "partial_sweep");
    assert_eq!(diag["detail"][0]["l"], 0);
}

#[test]
fn sphere_to_weyl_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = reslab(&["sphere-resonances", "--l-max", "15", "--out", "n.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(dir.path().join("w.json"), r#"{"records": "n.csv"}"#).unwrap();
    let o = reslab(&["weyl", "--config", "w.json", "--r", "10", "--j", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["count"].as_u64().unwrap() > 0);
    assert!(v["predicted"].as_f64().unwrap() > 0.0);

    // r = 20 needs l_max ≥ 30
    let o = reslab(&["weyl", "--config", "w.json", "--r", "20"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn weyl_on_empty_records_counts_zero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.csv"), "bc,l,re_lambda,im_lambda,multiplicity,band_kind,band_index\n").unwrap();
    std::fs::write(dir.path().join("w.json"), r#"{"records": "empty.csv"}"#).unwrap();
    let o = reslab(&["weyl", "--config", "w.json", "--r", "50"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 0);
}

#[test]
fn grushin_demo_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.json"), r#"{"lambdas": [0.0, 10.0, 40.0], "trials": 100}"#).unwrap();
    let a = reslab(&["grushin-demo", "--config", "g.json", "--seed", "7"], dir.path());
    let b = reslab(&["grushin-demo", "--config", "g.json", "--seed", "7"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["slope"].as_f64().unwrap() < 0.1);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = reslab(&["sphere-resonances", "--l-max", "8"], dir.path());
    let b = reslab(&["sphere-resonances", "--l-max", "8"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_thread_cap_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_reslab"))
        .args(["airy-zeros", "--j-max", "2"])
        .current_dir(dir.path())
        .env("RESLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
