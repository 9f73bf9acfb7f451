use std::process::{Command, Output};

use serde_json::Value;

fn glcoh(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glcoh"))
        .args(args)
        .env("GLCOH_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn report(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn pcomplex_suite_runs_a_thousand_cases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = glcoh(&["verify", "pcomplex", "--p", "3", "--seed", "4", "--report", out.to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 7);
    assert!(checks.iter().all(|c| c["status"] == "pass" && c["dims"][0] == 1000));
}

#[test]
fn lifted_d1_reports_h2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = glcoh(&["verify", "lifted", "--p", "2", "--d", "1", "--report", out.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let r = report(&out);
    assert_eq!(r["homology_tables"]["lifted/p=2/d=1/n=2/invariants of (A_1)_[1]"][2], 1);
    for key in ["params", "checks", "homology_tables"] {
        assert!(r.get(key).is_some());
    }
    let c = &r["checks"][0];
    for key in ["name", "status", "dims", "residual_norm", "wall_time_ms"] {
        assert!(c.get(key).is_some(), "{key}");
    }
}

#[test]
fn oversized_run_is_refused_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let o = glcoh(&["verify", "lifted", "--p", "5", "--d", "3"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("columns") && err.contains("--force"), "{err}");
}

#[test]
fn estimator_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = glcoh(&["estimate", "--p", "2", "--d", "2", "--n", "4"], dir.path());
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["largest_block"], 18496);
    assert_eq!(glcoh(&["estimate", "--p", "3", "--d", "2"], dir.path()).status.code(), Some(3));
    assert!(glcoh(&["estimate", "--p", "3", "--d", "1", "--n", "3"], dir.path()).status.success());
}

#[test]
fn cache_hit_skips_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = ["verify", "c1", "--p", "2", "--q", "32", "--report", out.to_str().unwrap()];
    assert!(glcoh(&args, dir.path()).status.success());
    let first = report(&out);
    assert!(first["params"]["invariant_blocks_computed"].as_u64().unwrap() > 0);
    assert!(glcoh(&args, dir.path()).status.success());
    let second = report(&out);
    assert_eq!(second["params"]["invariant_blocks_computed"], 0);
    assert_eq!(second["params"]["invariant_blocks_loaded"], first["params"]["invariant_blocks_computed"]);
    assert_eq!(second["homology_tables"], first["homology_tables"]);
    let stats = glcoh(&["cache", "stats"], dir.path());
    assert!(String::from_utf8_lossy(&stats.stdout).contains("entries"));
    assert!(glcoh(&["cache", "clear"], dir.path()).status.success());
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = glcoh(&["verify", "functor", "--p", "2", "--seed", "9", "--cases", "50", "--report", out.to_str().unwrap()], dir.path());
        assert!(o.status.success());
    }
    let strip = |mut v: Value| {
        for c in v["checks"].as_array_mut().unwrap() {
            c["wall_time_ms"] = Value::from(0);
        }
        v
    };
    assert_eq!(strip(report(&a)), strip(report(&b)));
}

#[test]
fn build_bar_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = glcoh(&["build", "bar", "--d", "2"], dir.path());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["objects"].as_array().unwrap().len(), 3);
    assert_eq!(glcoh(&["verify", "nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(glcoh(&["verify", "c1", "--p", "4"], dir.path()).status.code(), Some(2));
    assert_eq!(glcoh(&["verify", "lifted", "--p", "2", "--d", "2", "--n", "3"], dir.path()).status.code(), Some(2));
}

#[test]
fn odd_partial_run_is_labelled() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = glcoh(&["verify", "lifted", "--p", "3", "--d", "2", "--sample-dims", "2,3", "--report", out.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let r = report(&out);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["conclusive"] == false));
}
