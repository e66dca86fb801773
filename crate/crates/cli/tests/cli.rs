use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paraac-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

/// Runs `args` twice into fresh directories and returns the first output set.
fn rerun_identical(args: &[&str]) -> Vec<(String, Vec<u8>)> {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let out = TempDir::new().unwrap();
            let mut full = args.to_vec();
            let dir = out.path().to_string_lossy().into_owned();
            full.extend(["--out", &dir]);
            let o = lab(&full);
            assert_eq!(
                o.status.code(),
                Some(0),
                "{args:?}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            snapshot(out.path())
        })
        .collect();
    assert!(!runs[0].is_empty());
    assert_eq!(runs[0], runs[1], "{args:?} differs between runs");
    for (name, bytes) in &runs[0] {
        assert!(
            String::from_utf8_lossy(bytes).contains("\"config_hash\""),
            "{name} lacks the provenance header"
        );
    }
    runs.into_iter().next().unwrap()
}

#[test]
fn every_command_is_byte_reproducible() {
    let inputs = TempDir::new().unwrap();
    let d = inputs.path();
    let planted = write(
        d,
        "planted.json",
        r#"{"ns": [16, 32], "trials": 300, "circuits": ["const", "triangle", "set_clique"]}"#,
    );
    let switching = write(
        d,
        "switching.json",
        r#"{"trials": 200, "grid": {"functions": ["triangle", "edge_probe"], "n": [10], "ell": [3, 4], "q": [0.25], "s": [1, 2]}}"#,
    );
    let verify = write(
        d,
        "verify.json",
        r#"{"wsat_n": 4, "gamma_vars": 5, "cc_predicates": 50}"#,
    );
    let gap = write(d, "gap.json", r#"{"n": 64, "samples": 30}"#);
    let graph = write(d, "g.txt", "4 3\n1 2\n2 3\n1 3\n");
    let circuit = write(
        d,
        "tri.json",
        &paraac_core::circuit::Circuit::triangle_detector(4)
            .to_json()
            .to_string(),
    );

    let files = rerun_identical(&["switching", "--config", &switching, "--seed", "5"]);
    let csv = String::from_utf8_lossy(&files[0].1).into_owned();
    assert_eq!(csv.lines().count(), 2 + 8);
    rerun_identical(&["planted", "--config", &planted, "--seed", "11"]);
    rerun_identical(&["verify", "--config", &verify]);
    let gap_files = rerun_identical(&["gap", "--config", &gap, "--trials", "20"]);
    let names: Vec<&str> = gap_files.iter().map(|f| f.0.as_str()).collect();
    assert_eq!(names, ["gap_no.txt", "gap_yes.txt", "manifest.json"]);
    rerun_identical(&["colorcode", "--n", "64", "--k", "3", "--set", "1,5,9"]);
    rerun_identical(&["reduce", &graph, "--k", "2"]);
    rerun_identical(&["sample", "--n", "30", "--k", "2", "--planted", "6", "--seed", "4"]);
    rerun_identical(&["dtdepth", &circuit]);
}

#[test]
fn seed_changes_output() {
    let a = lab(&["sample", "--n", "30", "--p", "0.5", "--seed", "1"]);
    let b = lab(&["sample", "--n", "30", "--p", "0.5", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn colorcode_prints_json() {
    let o = lab(&["colorcode", "--n", "64", "--k", "3", "--set", "1,5,9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["found"], true);
    assert!(v["p"].as_u64().unwrap() < 9 * 6);
}

#[test]
fn dtdepth_of_an_edge_probe_is_two() {
    let d = TempDir::new().unwrap();
    let c = paraac_core::circuit::Circuit::edge_probe(5, paraac_core::Edge::new(0, 1)).unwrap();
    let path = write(d.path(), "probe.json", &c.to_json().to_string());
    let o = lab(&["dtdepth", &path]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dt_depth_v"], 2);
}

#[test]
fn invalid_configs_exit_2() {
    let d = TempDir::new().unwrap();
    let bad_xi = write(d.path(), "xi.json", r#"{"xi": 1.0}"#);
    assert_eq!(lab(&["planted", "--config", &bad_xi]).status.code(), Some(2));
    let unknown = write(d.path(), "u.json", r#"{"bogus": true}"#);
    assert_eq!(lab(&["gap", "--config", &unknown]).status.code(), Some(2));
    let infeasible = write(d.path(), "inf.json", r#"{"n": 8}"#);
    assert_eq!(lab(&["gap", "--config", &infeasible]).status.code(), Some(2));
    assert_eq!(lab(&["colorcode", "--n", "64"]).status.code(), Some(2));
    assert_eq!(
        lab(&["planted", "--config", "/nonexistent.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn failed_assertions_exit_1() {
    // All four vertices are planted, so the probe agrees exactly when the
    // edge is already present (probability 1/2); three trials cannot hit 1/2.
    let d = TempDir::new().unwrap();
    let cfg = write(
        d.path(),
        "p.json",
        r#"{"ns": [4], "xi": 0.9, "circuits": ["edge_probe"], "trials": 3}"#,
    );
    let o = lab(&["planted", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("assertion failed"));
}

#[test]
fn empty_verify_scope_passes_with_warning() {
    let d = TempDir::new().unwrap();
    let cfg = write(d.path(), "v.json", r#"{"suites": []}"#);
    let o = lab(&["verify", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
