//! End-to-end runs of the `lpbm` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn body(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/bodies").join(name).display().to_string()
}

fn lpbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpbm")).args(args).env_remove("LPBM_THREADS").output().unwrap()
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let (sq, disk) = (body("square.json"), body("disk.json"));
    let mut reports = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("r{threads}.json"));
        let o = lpbm(&[
            "--threads", threads, "run", "--bodies", &sq, &disk, "--check", "firey,concavity", "--p", "1,2,5",
            "--functional", "volume,quermass:1", "--seed", "7", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["summary"]["passed"], true);
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["bodies"].as_array().unwrap().len(), 2);
    assert!(v["jobs"].as_array().unwrap().iter().all(|j| j["passed"] == true));
    assert!(reports[0].ends_with(b"}\n"));
}

#[test]
fn seeds_change_monte_carlo_reports() {
    let (k, l) = (body("cube3.json"), body("ball3.json"));
    let run = |seed: &str| {
        lpbm(&[
            "run", "--bodies", &k, &l, "--check", "harmonic_quermass:1", "--p", "2",
            "--seed", seed, "--mc-samples", "500",
        ])
    };
    let (a, b, c) = (run("1"), run("1"), run("2"));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn csv_reports_have_one_header() {
    let o = lpbm(&["run", "--bodies", &body("square.json"), &body("disk.json"), "--check", "concavity", "--p", "2",
                   "--alpha-count", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "row,check,functional,p,alpha,value,stderr,lhs,rhs,slack,slack_stderr,verdict");
    assert!(lines.count() >= 5);
}

#[test]
fn curve_writes_alpha_value_stderr() {
    let o = lpbm(&["curve", "--bodies", &body("square.json"), &body("reuleaux.json"), "--functional", "quermass:1",
                   "--p", "2", "--alpha-count", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "alpha,value,stderr");
    assert_eq!(rows.len(), 12);
    let first: Vec<f64> = rows[1].split(',').map(|x| x.parse().unwrap()).collect();
    let last: Vec<f64> = rows[11].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!((first[0], last[0]), (0.0, 1.0));
    // perimeter of the unit square over 2 and of the Reuleaux triangle over 2, squared
    assert!((first[1] - 4.0).abs() < 1e-9, "{}", first[1]);
    assert!((last[1] - std::f64::consts::FRAC_PI_2.powi(2)).abs() < 1e-2, "{}", last[1]);
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "rep": {"type": "ball", "radius": -1}}"#).unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 1, "colour": "red"}"#).unwrap();
    let (sq, disk, cube) = (body("square.json"), body("disk.json"), body("cube3.json"));
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--bodies", bad.to_str().unwrap(), &disk, "--check", "firey"],
        vec!["run", "--bodies", &sq, &disk, "--check", "no_such_check"],
        vec!["run", "--bodies", &sq, &cube, "--check", "firey"],
        vec!["run", "--bodies", &sq, &disk, "--check", "firey", "--p", "0.5"],
        vec!["run", "--bodies", &sq, &disk, "--check", "firey", "--config", cfg.to_str().unwrap()],
        vec!["run", "--bodies", &sq, "--check", "firey"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let o = lpbm(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn config_files_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 3, "checks": ["firey"], "p_values": [2.0], "alpha_count": 7}"#).unwrap();
    let o = lpbm(&["run", "--config", cfg.to_str().unwrap(), "--bodies", &body("square.json"), &body("disk.json"),
                   "--check", "firey", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["config"]["alpha_count"], 7);
}

#[test]
fn firey_on_cube_and_ball_has_positive_slack() {
    let o = lpbm(&["run", "--seed", "42", "--check", "firey", "--p", "2", "--bodies", &body("cube3.json"), &body("ball3.json"),
                   "--mc-samples", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let records: Vec<&serde_json::Value> =
        v["jobs"].as_array().unwrap().iter().flat_map(|j| j["records"].as_array().unwrap()).collect();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["slack"].as_f64().unwrap() > 0.0));
}

#[test]
fn dilate_pairs_report_equality() {
    let o = lpbm(&["run", "--check", "capacity_q1", "--p", "1.5", "--bodies", &body("ball3.json"), &body("ball3_r2.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["jobs"][0]["records"][0];
    assert_eq!(r["equality_expected"], true);
    assert_eq!(r["equality_holds"], true);
}
