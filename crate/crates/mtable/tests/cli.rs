use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mtable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtable"))
        .args(args)
        .output()
        .expect("spawn mtable")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = mtable(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), value)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn count_json() {
    let (code, v) = json(&["count", "--n", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["m"], 2906);
    assert_eq!(v["density"].to_string(), "0.2906000000");
    assert_eq!(v["algorithm"], "dense");
}

#[test]
fn count_segmented_matches_dense() {
    let (_, dense) = json(&["count", "--n", "1000"]);
    let (_, seg) = json(&["count", "--n", "1000", "--segment-bits", "65536"]);
    let (_, par) = json(&["count", "--n", "1000", "--segment-bits", "65536", "--parallel"]);
    assert_eq!(dense["m"], 248083);
    assert_eq!(seg["m"], dense["m"]);
    assert_eq!(par["m"], dense["m"]);
    assert_eq!(seg["algorithm"], "segmented");
}

#[test]
fn multiplicity_methods_agree() {
    let (code, v) = json(&["multiplicity", "--n", "7", "--k", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["direct"], 4);
    assert_eq!(v["formula"], 4);
    assert_eq!(v["agree"], true);
}

#[test]
fn formula_outside_domain_is_a_usage_error() {
    let out = mtable(&["multiplicity", "--n", "2", "--k", "12", "--method", "formula"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn direct_accepts_any_k() {
    let (code, v) = json(&["multiplicity", "--n", "2", "--k", "12", "--method", "direct"]);
    assert_eq!(code, 0);
    assert_eq!(v["direct"], 0);
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(mtable(&["count"]).status.code(), Some(2));
    assert_eq!(mtable(&["count", "--n", "x"]).status.code(), Some(2));
    assert_eq!(mtable(&["count", "--n", "10", "--segment-bits", "10"]).status.code(), Some(2));
    assert_eq!(mtable(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(mtable(&["bounds", "--k", "12", "--robin-c", "1/0"]).status.code(), Some(2));
    assert_eq!(mtable(&["count", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn help_goes_to_stdout() {
    let out = mtable(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("census"));
}

#[test]
fn identities_at_small_n() {
    for n in ["1", "2", "30"] {
        let (code, v) = json(&["verify", "--suite", "identities", "--n", n]);
        assert_eq!(code, 0, "n = {n}: {v}");
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn sigma_bound_surfaces_twelve() {
    let (code, v) = json(&["verify", "--suite", "sigma-bound", "--max", "2000"]);
    assert_eq!(code, 1);
    assert_eq!(v["margin_at_12"].to_string(), "-0.0001799459");
    assert_eq!(v["status_at_12"], "violated");
    let rows = v["violations"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["argument"], 12);

    let (code, v) = json(&["verify", "--suite", "sigma-bound", "--max", "2000", "--robin-c", "6483/10000"]);
    assert_eq!(code, 0);
    assert_eq!(v["robin_c"], "6483/10000");
    assert_eq!(v["status_at_12"], "holds");
}

#[test]
fn divisor_bound_holds() {
    let (code, v) = json(&["verify", "--suite", "divisor-bound", "--max", "20000", "--parallel"]);
    assert_eq!(code, 0);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn bounds_at_twelve() {
    let (code, v) = json(&["bounds", "--k", "12"]);
    assert_eq!(code, 1);
    assert_eq!(v["d"], 6);
    assert_eq!(v["sigma"], 28);
    assert_eq!(v["divisor_status"], "holds");
    assert_eq!(v["sigma_status"], "violated");
}

#[test]
fn series_complex_exponent() {
    let (code, v) = json(&["series", "--s", "2,3", "--n", "50"]);
    assert_eq!(code, 0);
    assert_eq!(v["s"], "2+3i");
    let (code, _) = json(&["series", "--s", "-1", "--n", "50"]);
    assert_eq!(code, 0);
}

fn census_csv(cache: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "--format",
        "csv",
        "census",
        "--n-list",
        "10,100,1000",
        "--cache",
        cache.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    mtable(&args)
}

#[test]
fn census_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("census.csv");

    let first = census_csv(&cache, &[]);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,density,mean_multiplicity"));
    assert_eq!(lines.next(), Some("10,42,0.4200000000,2.3809523810"));
    assert!(text.contains("\n1000,248083,0.2480830000,"));
    assert_eq!(fs::read_to_string(&cache).unwrap(), "n,m\n10,42\n100,2906\n1000,248083\n");

    let (_, v) = json(&["census", "--n-list", "100,10", "--cache", cache.to_str().unwrap()]);
    let rows = v["census"].as_array().unwrap();
    assert_eq!(rows[0]["n"], 100);
    assert!(rows.iter().all(|r| r["source"] == "cache"));

    let second = census_csv(&cache, &["--parallel"]);
    assert_eq!(stdout(&second), text);
}

#[test]
fn corrupt_cache_is_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("census.csv");
    fs::write(&cache, "n,m\n10,99999\n").unwrap();

    let out = census_csv(&cache, &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning:"), "{}", stderr(&out));
    assert!(stdout(&out).contains("10,42,"));
    assert!(fs::read_to_string(&cache).unwrap().starts_with("n,m\n10,42\n"));
}

#[test]
fn parallel_output_matches_serial() {
    let strip = |v: &mut Value| {
        v.as_object_mut().unwrap().remove("elapsed_seconds");
        if let Some(rows) = v.get_mut("census").and_then(Value::as_array_mut) {
            for r in rows {
                r.as_object_mut().unwrap().remove("elapsed_seconds");
            }
        }
    };
    for args in [
        &["census", "--n-list", "50,300"][..],
        &["verify", "--suite", "bracket", "--max", "5000"][..],
        &["verify", "--suite", "sigma-bound", "--max", "5000"][..],
    ] {
        let (c1, mut serial) = json(args);
        let mut with_par = args.to_vec();
        with_par.push("--parallel");
        let (c2, mut par) = json(&with_par);
        strip(&mut serial);
        strip(&mut par);
        assert_eq!(c1, c2);
        assert_eq!(serial, par, "{args:?}");
    }
}

#[test]
fn count_shares_the_census_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("census.csv");
    let path = cache.to_str().unwrap();

    let (code, v) = json(&["count", "--n", "50", "--cache", path]);
    assert_eq!(code, 0);
    assert_eq!(v["source"], "computed");
    assert_eq!(fs::read_to_string(&cache).unwrap(), "n,m\n50,800\n");

    let (_, v) = json(&["census", "--n-list", "50", "--cache", path]);
    assert_eq!(v["census"][0]["source"], "cache");
    let (_, v) = json(&["count", "--n", "50", "--cache", path]);
    assert_eq!(v["source"], "cache");
    assert_eq!(v["m"], 800);
}
