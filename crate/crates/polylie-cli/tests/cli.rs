use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn polylie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polylie")).args(args).env_remove("POLYLIE_CACHE_DIR").output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Record bodies with the timing field removed.
fn stable(out: &Output) -> Vec<Value> {
    records(out)
        .into_iter()
        .map(|mut r| {
            r.as_object_mut().unwrap().remove("elapsed_ms");
            r
        })
        .collect()
}

#[test]
fn dim_cl_small() {
    let out = polylie(&["dim-cl", "--weight", "2", "--points", "5"]);
    assert_eq!(code(&out), 0);
    let r = &records(&out)[0];
    assert_eq!(r["suite"], "dim-cl");
    assert_eq!(r["expected"], "4");
    assert_eq!(r["computed"], "4");
    assert_eq!(r["verdict"], "pass");
    for f in ["params", "elapsed_ms", "version_hash"] {
        assert!(r.get(f).is_some(), "{f}");
    }
}

#[test]
fn dim_cl_too_large() {
    let out = polylie(&["dim-cl", "--weight", "6", "--points", "10"]);
    assert_eq!(code(&out), 3);
    assert_eq!(records(&out)[0]["verdict"], "too-large");
}

#[test]
fn psi_passes() {
    let out = polylie(&["verify-psi", "--N", "3", "--degree", "8"]);
    assert_eq!(code(&out), 0);
    assert_eq!(records(&out)[0]["verdict"], "pass");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&polylie(&["frobnicate"])), 2);
    assert_eq!(code(&polylie(&["dim-cl", "--weight", "2"])), 2);
    assert_eq!(code(&polylie(&["dim-cl", "--weight", "2", "--points", "5", "--colour", "red"])), 2);
    assert_eq!(code(&polylie(&["verify-qli-equation", "--n", "3", "--N", "4"])), 2);
    assert_eq!(code(&polylie(&["verify-symmetry", "--n", "4", "--k", "0"])), 2);
    assert_eq!(code(&polylie(&["cache", "list"])), 2);
}

#[test]
fn passing_subcommands_exit_zero() {
    for args in [
        vec!["verify-coalgebra", "--weight", "3", "--points", "4"],
        vec!["verify-qli-equation", "--n", "2", "--N", "4"],
        vec!["verify-qli-coproduct", "--n", "1", "--k", "1"],
        vec!["verify-adjacency", "--n", "2", "--k", "0"],
        vec!["dim-qli", "--n", "2", "--m", "4"],
        vec!["dim-inv", "--n", "3", "--m", "4"],
        vec!["verify-gangl4"],
        vec!["verify-gangl6"],
    ] {
        let out = polylie(&args);
        assert_eq!(code(&out), 0, "{args:?}");
        let recs = records(&out);
        assert!(!recs.is_empty(), "{args:?}");
        assert!(recs.iter().all(|r| r["verdict"] == "pass"), "{args:?}");
    }
}

#[test]
fn failing_check_exits_one() {
    // The symmetrized QLi is invariant under the cyclic shift in weight 1,
    // while the stated sign is −1.
    let out = polylie(&["verify-symmetry", "--n", "1", "--k", "0"]);
    assert_eq!(code(&out), 1);
    let r = &records(&out)[0];
    assert_eq!(r["verdict"], "fail");
    assert_eq!(r["expected"], "-1");
    assert_eq!(r["computed"], "1");
}

#[test]
fn high_coalgebra_weights_are_skipped() {
    let out = polylie(&["verify-coalgebra", "--weight", "7", "--points", "2"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert!(recs.iter().any(|r| r["suite"] == "cojacobi" && r["verdict"] == "skipped"));
}

#[test]
fn zagier_record_is_informational() {
    let out = polylie(&["verify-gangl4", "--zagier"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    let z = recs.iter().find(|r| r["suite"] == "zagier-configuration").expect("zagier record");
    assert_eq!(z["verdict"], "info");
    assert_eq!(z["computed"], "0");
}

#[test]
fn report_is_deterministic() {
    let args = ["verify-coalgebra", "--weight", "3", "--points", "4", "--seed", "7"];
    let a = polylie(&args);
    let b = polylie(&args);
    assert_eq!(stable(&a), stable(&b));
    let c = polylie(&["verify-coalgebra", "--weight", "3", "--points", "4", "--seed", "8"]);
    assert_ne!(stable(&a), stable(&c));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let out = polylie(&["dim-qli", "--n", "2", "--m", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1);
}

fn with_cache(dir: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend(["--cache-dir", dir.to_str().unwrap()]);
    polylie(&all)
}

#[test]
fn empty_cache_lists_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = with_cache(dir.path(), &["cache", "list"]);
    assert_eq!(code(&out), 0);
    assert_eq!(records(&out)[0]["computed"], "");
}

#[test]
fn cache_round_trip_keeps_rank() {
    let dir = tempfile::tempdir().unwrap();
    let first = with_cache(dir.path(), &["dim-cl", "--weight", "2", "--points", "5"]);
    assert_eq!(code(&first), 0);
    let listed = with_cache(dir.path(), &["cache", "list"]);
    assert_eq!(records(&listed)[0]["computed"], "cl-w2-p5.basis");
    let second = with_cache(dir.path(), &["dim-cl", "--weight", "2", "--points", "5"]);
    assert_eq!(code(&second), 0);
    assert_eq!(records(&second)[0]["computed"], records(&first)[0]["computed"]);
    let verify = with_cache(dir.path(), &["cache", "verify"]);
    assert_eq!(code(&verify), 0);
    let cleared = with_cache(dir.path(), &["cache", "clear"]);
    assert_eq!(records(&cleared)[0]["computed"], "removed 1");
}

#[test]
fn corrupted_entry_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&with_cache(dir.path(), &["dim-cl", "--weight", "2", "--points", "5"])), 0);
    let file = dir.path().join("cl-w2-p5.basis");
    let mut text = fs::read_to_string(&file).unwrap();
    text.push_str("1*[p01|p02]\n");
    fs::write(&file, text).unwrap();
    let out = with_cache(dir.path(), &["cache", "verify"]);
    assert_eq!(code(&out), 1);
    let r = &records(&out)[0];
    assert_eq!(r["verdict"], "fail");
    assert!(r["computed"].as_str().unwrap().contains("hash"));
    assert!(!file.exists());
}

#[test]
fn corrupted_entry_is_not_used() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&with_cache(dir.path(), &["dim-cl", "--weight", "2", "--points", "5"])), 0);
    fs::write(dir.path().join("cl-w2-p5.basis"), "garbage").unwrap();
    let out = with_cache(dir.path(), &["dim-cl", "--weight", "2", "--points", "5"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cl-w2-p5.basis"));
}
