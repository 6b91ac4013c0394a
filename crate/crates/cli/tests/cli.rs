use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pfaff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfaff")).args(args).env_remove("PFAFF_SEED").output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn records(r: &Value) -> &Vec<Value> {
    r["records"].as_array().expect("records array")
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut rd = csv::Reader::from_path(path).unwrap();
    rd.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn cauchy_binet_suite_passes() {
    let out = pfaff(&["verify", "cauchy-binet", "--trials", "300", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["parameters"]["trials"], 300);
    assert!(records(&r).iter().all(|x| x["pass"] == true && x["provenance"] == "identity"));
}

#[test]
fn determinant_suite_contains_the_fixture() {
    let out = pfaff(&["verify", "determinants", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let fixture = records(&r).iter().find(|x| x["name"] == "fourth example Det_M").unwrap();
    assert!((fixture["value"].as_f64().unwrap() - 0.3745).abs() < 1e-3);
    assert_eq!(fixture["reference"], 0.3745);
}

#[test]
fn algebra_without_trials_checks_the_unit_table() {
    let out = pfaff(&["verify", "algebra", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(records(&r).iter().filter(|x| x["name"].as_str().unwrap().starts_with("unit table")).count() >= 6);
    assert!(records(&r).iter().all(|x| x["value"] == 0.0));
}

#[test]
fn remaining_suites_pass() {
    for suite in ["kernels", "fredholm", "dyson-lemma"] {
        let out = pfaff(&["verify", suite, "--trials", "10", "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(pfaff(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(pfaff(&["spectrum", "cse:M=2", "--arc", "0,1"]).status.code(), Some(2));
    assert_eq!(pfaff(&["spectrum", "cse:N=2"]).status.code(), Some(2));
    assert_eq!(pfaff(&["spectrum", "cse:N=2", "--arc", "1,0"]).status.code(), Some(2));
    assert_eq!(pfaff(&["sample", "cse", "--n", "3", "--steps", "10", "--burn", "20", "-o", "/dev/null"]).status.code(), Some(2));
}

#[test]
fn half_circle_spectrum_for_two_points() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spectrum.csv");
    let out = pfaff(&["spectrum", "cse:N=2", "--arc", "-1.5708,1.5708", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 2);
    for row in rows {
        let (re, im): (f64, f64) = (row[4].parse().unwrap(), row[5].parse().unwrap());
        assert!((0.0..=1.0).contains(&re) && im.abs() < 1e-8);
    }
}

#[test]
fn full_arc_recovers_the_diagonal_form() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("full.csv");
    let out = pfaff(&["spectrum", "cse:N=3", "--arc=-3.141592653589793,3.141592653589793", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for row in csv_rows(&csv) {
        assert!((row[4].parse::<f64>().unwrap() - 1.0).abs() < 1e-8, "{row:?}");
    }
}

#[test]
fn random_survey_is_seeded() {
    let a = report(&pfaff(&["spectrum", "cse:N=6", "--random", "10", "--seed", "3"]));
    let b = report(&pfaff(&["spectrum", "cse:N=6", "--random", "10", "--seed", "3"]));
    assert_eq!(a["parameters"], b["parameters"]);
    assert_eq!(a["records"], b["records"]);
    assert_eq!(records(&a).len(), 30);
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pfaff"))
        .args(["verify", "algebra", "--trials", "2"])
        .env("PFAFF_SEED", "41")
        .output()
        .unwrap();
    assert_eq!(report(&out)["seed"], 41);
}

#[test]
fn clt_distances_decrease() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("clt.csv");
    let out = pfaff(&["clt", "--ns", "4,8,16,32", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let d: Vec<f64> = csv_rows(&csv).iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(d.len(), 4);
    assert!(d.windows(2).all(|w| w[1] <= w[0]));
    let single = pfaff(&["clt", "--ns", "8"]);
    assert_eq!(single.status.code(), Some(0));
    assert!(records(&report(&single)).is_empty());
    assert_eq!(pfaff(&["clt", "--arc=-3.141592653589793,3.141592653589793"]).status.code(), Some(2));
}

#[test]
fn sample_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("cse4.jsonl");
    let json = dir.path().join("sample.json");
    let out = pfaff(&[
        "sample", "cse", "--n", "4", "--steps", "200000", "--burn", "20000", "--thin", "10", "--seed", "1",
        "-o", samples.to_str().unwrap(), "--json", json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(records(&r)[0]["value"], 18000.0);
    assert_eq!(std::fs::read_to_string(&samples).unwrap().lines().count(), 18000);

    let csv = dir.path().join("compare.csv");
    let out = pfaff(&["compare", "cse:N=4", samples.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let mean = records(&r).iter().find(|x| x["name"] == "arc 0 count mean").unwrap();
    assert!((mean["reference"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert_eq!(mean["provenance"], "MC±SE");
    let rows = csv_rows(&csv);
    assert_eq!(rows.iter().filter(|r| r[0] == "r1").count(), 16);
    assert_eq!(rows.iter().filter(|r| r[0] == "r2").count(), 256);
}

#[test]
fn compare_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(pfaff(&["compare", "cse:N=4", empty.to_str().unwrap()]).status.code(), Some(2));
    let line = dir.path().join("line.jsonl");
    std::fs::write(&line, "{\"chain\":0,\"step\":1,\"points\":[4.0,0.1,-0.3,1.0]}\n").unwrap();
    assert_eq!(pfaff(&["compare", "cse:N=4", line.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(pfaff(&["compare", "gse:N=3", line.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn gse_samplers_agree_with_the_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let mc = dir.path().join("gse.jsonl");
    let out = pfaff(&[
        "sample", "gse", "--n", "3", "--steps", "60000", "--burn", "5000", "--thin", "5", "--chains", "4",
        "--seed", "2", "-o", mc.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let matrix = dir.path().join("matrix.jsonl");
    let out = pfaff(&["sample", "gse-matrix", "--n", "3", "--count", "40000", "--seed", "4", "-o", matrix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let sigma = report(&out)["metadata"]["scale_fit"]["sigma"].as_f64().unwrap();
    assert!((sigma - 2f64.sqrt()).abs() < 0.05, "{sigma}");
    for file in [&mc, &matrix] {
        let out = pfaff(&["compare", "gse:N=3", file.to_str().unwrap(), "--bins", "20"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
