//! End-to-end tests of the command-line binary: exit codes, deterministic
//! output, and the basic subcommands against the bundled fixture workspace.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_logbar")
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/p1-011.json")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary launches")
}

#[test]
fn validate_fixture_ok() {
    let ws = fixture();
    let out = run(&["validate", ws.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"ok\": true"));
}

#[test]
fn missing_file_is_usage_error() {
    let out = run(&["validate", "/nonexistent/workspace.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_subcommand_is_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_word_is_usage_error() {
    let ws = fixture();
    let out = run(&["regint", ws.to_str().unwrap(), "dch", "no_such_word"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shuffle_deconcat_antipode_roundtrip() {
    let ws = fixture();
    let w = ws.to_str().unwrap();
    let out = run(&["shuffle", w, "single", "single"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // [a] sh [a] = 2 [a|a]
    assert!(text.contains("\"coeff\": \"2\""), "{text}");

    let out = run(&["deconcat", w, "z2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("first_factor_initial_leg"), "{text}");

    let out = run(&["antipode", w, "z2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // S[a|b] = [b|a] with sign (-1)^2 = +1.
    assert!(text.contains("\"dlog:1\""), "{text}");
}

#[test]
fn h0_dims_match_model() {
    let ws = fixture();
    let out = run(&["h0", ws.to_str().unwrap(), "--max-weight", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["h0_dims"], serde_json::json!([1, 3, 7, 15]));
}

#[test]
fn hopf_check_small_passes() {
    let out = run(&["hopf-check", "--alphabet", "2", "--max-len", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"pass\": true"), "{text}");
}

#[test]
fn pair_output_is_byte_identical_across_runs() {
    let ws = fixture();
    let w = ws.to_str().unwrap();
    let a = run(&["--serial", "pair", w, "dch", "minus_z2"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&["--serial", "pair", w, "dch", "minus_z2"]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "serial runs must render identically");
    // Parallel execution must agree byte for byte as well.
    let c = run(&["--parallel", "pair", w, "dch", "minus_z2"]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(a.stdout, c.stdout, "parallel run must match serial bytes");
    // And the value is -zeta(2).
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let re = doc["value"]["re"].as_f64().unwrap();
    let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
    assert!((re + zeta2).abs() < 1e-6, "value {re}");
}

#[test]
fn push_tangent_cli() {
    let out = run(&[
        "push-tangent",
        "--exponents",
        "2",
        "--units",
        "1",
        "--scales",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"9+0i\""), "{text}");
}
