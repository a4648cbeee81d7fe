use std::path::Path;
use std::process::{Command, Output};

use defq::polyalg::poisson_bracket;
use defq::Polynomial;
use serde_json::Value;

fn defq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defq"))
        .args(args)
        .env_remove("DEFQ_WEIGHT_CACHE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn coeffs(v: &Value) -> Vec<String> {
    v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().to_string())
        .collect()
}

const NOT_POISSON: &str = r#"{"dim": 3, "components": {"1,2": "x1", "2,3": "x2"}}"#;

#[test]
fn graphs_lists_ids_and_counts() {
    let v = json(&defq(&["graphs", "--n", "1", "--nbar", "2"]));
    assert_eq!(v["count"], 4);
    let ids: Vec<&str> = v["graphs"].as_array().unwrap().iter().map(|g| g["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"1;2;[b1,b2]") && ids.contains(&"1;2;[b2,b1]"));
    assert!(v["graphs"].as_array().unwrap().iter().all(|g| g["edge_count_ok"] == true));

    let v = json(&defq(&["graphs", "--n", "0", "--nbar", "2"]));
    assert_eq!(v["count"], 1);
    assert_eq!(v["graphs"][0]["id"], "0;2;");
}

#[test]
fn graphs_outside_scope_is_a_usage_error() {
    assert_eq!(code(&defq(&["graphs", "--n", "1", "--nbar", "0"])), 2);
    assert_eq!(code(&defq(&["graphs", "--n", "1", "--nbar", "3"])), 2);
}

#[test]
fn wedge_weight_snaps_to_one_half_and_is_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("w.json");
    let c = cache.to_str().unwrap();
    let args = ["weight", "1;2;[b1,b2]", "--samples", "1000000", "--seed", "5", "--cache", c];
    let first = defq(&args);
    let v = json(&first);
    let (mean, se) = (v["mean"].as_f64().unwrap(), v["stderr"].as_f64().unwrap());
    assert!((mean - 0.5).abs() <= 3.0 * se, "{mean} ± {se}");
    assert_eq!(v["snapped"], "1/2");

    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(stored["1;2;[b1,b2]"]["snapped"], "1/2");

    let again = defq(&args);
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn wrong_edge_count_has_weight_zero() {
    let v = json(&defq(&["weight", "2;2;[b1,b2],[b1]", "--samples", "10000"]));
    assert_eq!(v["mean"], 0.0);
    assert_eq!(v["snapped"], "0");
}

#[test]
fn malformed_graph_id_is_rejected() {
    assert_eq!(code(&defq(&["weight", "1;2;[b1"])), 2);
    assert_eq!(code(&defq(&["weight", "1;2;[b1,b2]", "--samples", "10"])), 2);
}

#[test]
fn star_first_order_is_the_poisson_bracket() {
    let v = json(&defq(&["star", "--pi", "so3", "--f", "x1", "--g", "x2", "--order", "2"]));
    let cs = coeffs(&v);
    assert_eq!(v["order"], 2);
    assert_eq!(cs[0], "x1 x2");

    let pi = defq::polyalg::PolyVector::from_components(
        3,
        2,
        [
            (vec![0, 1], Polynomial::var(3, 2).unwrap()),
            (vec![1, 2], Polynomial::var(3, 0).unwrap()),
            (vec![0, 2], -&Polynomial::var(3, 1).unwrap()),
        ],
    )
    .unwrap();
    let x = |i| Polynomial::var(3, i).unwrap();
    let expected = poisson_bracket(&pi, &x(0), &x(1)).unwrap();
    assert_eq!(cs[1], expected.to_string());
}

#[test]
fn star_trivial_cases() {
    let zero = r#"{"dim": 2, "components": {}}"#;
    let v = json(&defq(&["star", "--pi", zero, "--f", "x1 + x2", "--g", "x2^2"]));
    let fg = Polynomial::parse("x1 x2^2 + x2^3", 2).unwrap().to_string();
    assert_eq!(coeffs(&v), [fg.as_str(), "0", "0"]);

    let v = json(&defq(&["star", "--pi", "so3", "--f", "1", "--g", "x1 x3 - 2 x2"]));
    let g = Polynomial::parse("x1 x3 - 2 x2", 3).unwrap().to_string();
    assert_eq!(coeffs(&v), [g.as_str(), "0", "0"]);
}

#[test]
fn star_output_is_byte_stable() {
    let args = ["star", "--pi", "so3", "--f", "x1^2 x2", "--g", "x3 x2 - x1"];
    assert_eq!(defq(&args).stdout, defq(&args).stdout);
}

#[test]
fn star_reads_structure_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pi.json");
    std::fs::write(&path, r#"{"dim": 2, "components": {"1,2": "1"}}"#).unwrap();
    let a = json(&defq(&["star", "--pi", path.to_str().unwrap(), "--f", "x1^2", "--g", "x2^2"]));
    let b = json(&defq(&["moyal", "--pi", "canonical", "--f", "x1^2", "--g", "x2^2"]));
    assert_eq!(a, b);
    assert_eq!(coeffs(&a), ["x1^2 x2^2", "4 x1 x2", "2"]);
}

#[test]
fn star_warns_about_non_poisson_input() {
    let out = defq(&["star", "--pi", NOT_POISSON, "--f", "x1", "--g", "x2", "--order", "1"]);
    let v = json(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Jacobi"));
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn star_errors() {
    // order three needs weights that are not shipped
    assert_eq!(code(&defq(&["star", "--pi", "so3", "--f", "x1", "--g", "x2", "--order", "3"])), 1);
    assert_eq!(code(&defq(&["star", "--pi", "so3", "--f", "x1", "--g", "x2", "--order", "4"])), 2);
    assert_eq!(code(&defq(&["star", "--pi", "so3", "--f", "x1 +", "--g", "x2"])), 2);
    assert_eq!(code(&defq(&["star", "--pi", r#"{"dim": 2, "components": {"2,1": "1"}}"#, "--f", "1", "--g", "1"])), 2);
    assert_eq!(code(&defq(&["star", "--pi", "/nonexistent/pi.json", "--f", "1", "--g", "1"])), 2);
}

#[test]
fn mc_weights_reproduce_moyal_or_report_failure() {
    let args = |n: &'static str| {
        ["star", "--pi", "canonical", "--f", "x1^2", "--g", "x2^2", "--weights", "mc", "--samples", n]
    };
    let v = json(&defq(&args("200000")));
    assert_eq!(coeffs(&v), ["x1^2 x2^2", "4 x1 x2", "2"]);
    // too few samples for a unique fraction among denominators up to 24
    let out = defq(&args("10000"));
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no unique fraction"));
    assert_eq!(code(&defq(&args("100"))), 2);
}

#[test]
fn moyal_needs_a_constant_structure() {
    assert_eq!(code(&defq(&["moyal", "--pi", "so3", "--f", "x1", "--g", "x2"])), 2);
}

#[test]
fn jacobi_check() {
    let v = json(&defq(&["check", "jacobi", "--pi", "so3"]));
    assert_eq!(v["pass"], true);
    let out = defq(&["check", "jacobi", "--pi", NOT_POISSON]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(code(&defq(&["check", "jacobi"])), 2);
}

#[test]
fn assoc_check_passes_exactly_and_alias_agrees() {
    let a = defq(&["check", "assoc", "--pi", "so3", "--order", "2", "--weights", "table"]);
    let v = json(&a);
    assert_eq!(v["pass"], true);
    assert_eq!(v["triples"], 189);
    let b = defq(&["assoc", "--pi", "so3", "--order", "2", "--weights", "table"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn assoc_check_fails_for_a_non_poisson_structure() {
    let out = defq(&["assoc", "--pi", NOT_POISSON, "--order", "2"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn assoc_check_with_fresh_estimates() {
    let v = json(&defq(&["assoc", "--pi", "so3", "--weights", "mc", "--samples", "20000", "--seed", "1"]));
    assert_eq!(v["pass"], true);
    assert!(v["coefficients"].as_u64().unwrap() > 0);
}

#[test]
fn wick_and_hochschild_checks_pass() {
    let v = json(&defq(&["check", "wick", "--order", "3"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["cases"], 50);
    let v = json(&defq(&["check", "wick", "--pi", "canonical", "--seed", "4"]));
    assert_eq!(v["pass"], true);
    let v = json(&defq(&["check", "hochschild", "--seed", "2"]));
    assert_eq!(v["pass"], true);
}

#[test]
fn unknown_check_kind_is_a_usage_error() {
    assert_eq!(code(&defq(&["check", "bogus"])), 2);
}

fn run_with_env(args: &[&str], env_cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defq"))
        .args(args)
        .env("DEFQ_WEIGHT_CACHE", env_cache)
        .output()
        .unwrap()
}

#[test]
fn cache_location_from_env_and_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let env_path = dir.path().join("env.json");
    let flag_path = dir.path().join("flag.json");
    let id = "1;2;[b2,b1]";
    let out = run_with_env(&["weight", id, "--samples", "10000"], &env_path);
    assert_eq!(code(&out), 0);
    assert!(env_path.exists());

    std::fs::remove_file(&env_path).unwrap();
    let out = run_with_env(&["weight", id, "--samples", "10000", "--cache", flag_path.to_str().unwrap()], &env_path);
    assert_eq!(code(&out), 0);
    assert!(flag_path.exists() && !env_path.exists());
}

#[test]
fn cache_keeps_the_last_write_per_graph() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("w.json");
    let c = cache.to_str().unwrap();
    json(&defq(&["weight", "1;2;[b1,b2]", "--samples", "10000", "--seed", "1", "--cache", c]));
    json(&defq(&["weight", "1;2;[b2,b1]", "--samples", "10000", "--seed", "1", "--cache", c]));
    json(&defq(&["weight", "1;2;[b1,b2]", "--samples", "20000", "--seed", "2", "--cache", c]));
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(stored.as_object().unwrap().len(), 2);
    assert_eq!(stored["1;2;[b1,b2]"]["seed"], 2);
    assert_eq!(stored["1;2;[b1,b2]"]["samples"], 20000);
}
