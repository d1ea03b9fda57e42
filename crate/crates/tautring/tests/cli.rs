//! End-to-end tests of the command-line surface: exit-status contract,
//! JSON output shapes, and the cache file.

use std::process::{Command, Output};

fn tautring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tautring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_integrate_psi_power() {
    let out = tautring(&["eval", "--space", "2,1", "--integrate", "psi1*psi1*psi1*psi1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "\"1/1152\"");
}

#[test]
fn eval_integrate_lambda_cubed() {
    let out = tautring(&["eval", "--space", "2,0", "--integrate", "la*la*la"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "\"1/2880\"");
}

#[test]
fn eval_expand_gamma_has_corrected_coefficient() {
    let out = tautring(&["eval", "--space", "2,2", "--expand", "gamma{1:}"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coeff"], "1/2");
}

#[test]
fn eval_pair_degree_mismatch_exits_two() {
    let out = tautring(&["eval", "--space", "2,1", "--pair", "psi1", "psi1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_parse_error_exits_two() {
    let out = tautring(&["eval", "--space", "2,1", "--integrate", "psi1 + nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("parse error"), "stderr: {err}");
}

#[test]
fn verify_unknown_check_exits_two() {
    let out = tautring(&["verify", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_single_check_reports_json() {
    let out = tautring(&["verify", "eq2-eq3"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["name"], "eq2-eq3");
    assert_eq!(report["pass"], true);
    assert!(report["spanning_size"].as_u64().unwrap() > 0);
}

#[test]
fn verify_testfamily_passes() {
    let out = tautring(&["verify", "testfamily"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn strata_counts_on_closed_genus_two() {
    let out = tautring(&["strata", "--space", "2,0", "--codim", "1"]);
    assert!(out.status.success());
    let items: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(items.as_array().unwrap().len(), 2);
}

#[test]
fn strata_listing_contains_expected_codim_two_loci() {
    let out = tautring(&["strata", "--space", "2,2", "--codim", "2"]);
    assert!(out.status.success());
    let items: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let items = items.as_array().unwrap();
    assert_eq!(items.len(), 13);
    // The two-loop rational stratum has automorphism order 8, the
    // two-elliptic-tails and elliptic-bridge strata order 2.
    let auts: Vec<u64> = items
        .iter()
        .map(|i| i["aut_order"].as_u64().unwrap())
        .collect();
    assert!(auts.contains(&8));
    assert!(auts.contains(&2));
}

#[test]
fn strata_unstable_space_exits_two() {
    let out = tautring(&["strata", "--space", "0,2", "--codim", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decorated_strata_integrate_against_known_row() {
    let out = tautring(&["strata", "--space", "2,0", "--codim", "3", "--decorated"]);
    assert!(out.status.success());
    let items: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(!items.as_array().unwrap().is_empty());
}

#[test]
fn testfamily_report_shape() {
    let out = tautring(&["testfamily"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["products"]["hyp21_dot_pullback_hyp22"], 27);
    assert_eq!(v["products"]["pullback_hyp22_dot_d023"], -9);
    assert_eq!(v["multiplicities"]["alpha"], "1");
    assert_eq!(v["restrictions"]["psi1"]["f"], 1);
}

#[test]
fn cache_file_round_trip() {
    let dir = std::env::temp_dir().join("tautring-cli-cache");
    std::fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("tau.cache");
    let _ = std::fs::remove_file(&cache);
    let out = tautring(&[
        "eval",
        "--space",
        "2,1",
        "--integrate",
        "psi1*psi1*psi1*psi1",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let contents = std::fs::read_to_string(&cache).unwrap();
    assert!(contents.lines().any(|l| l.starts_with("2;4 ")), "{contents}");
    // Second run loads the cache and still gets the right answer.
    let out2 = tautring(&[
        "eval",
        "--space",
        "2,1",
        "--integrate",
        "psi1*psi1*psi1*psi1",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out2).trim(), "\"1/1152\"");
}

#[test]
fn eval_equal_verdict() {
    let out = tautring(&[
        "eval",
        "--space",
        "1,2",
        "--equal",
        "psi2",
        "psi1",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["equal"], true);
    let out2 = tautring(&["eval", "--space", "2,1", "--equal", "dirr", "psi1"]);
    assert_eq!(out2.status.code(), Some(1));
}

#[test]
fn jobs_flag_sequential_agrees() {
    let out = tautring(&["verify", "eq2-eq3", "--jobs", "1"]);
    assert!(out.status.success());
}
