//! End-to-end runs of the `poisson-maxima` binary.

use std::collections::HashMap;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poisson-maxima"))
        .args(args)
        .env_remove("POISSON_MAXIMA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn records(csv_text: &str) -> Vec<HashMap<String, String>> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| headers.iter().map(String::from).zip(r.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn dist_n_one_is_poisson() {
    let rows = records(&stdout(&["dist", "--lambda", "1", "--log10-n", "0", "--k-max", "3"]));
    assert_eq!(rows.len(), 4);
    let e = (-1.0f64).exp();
    let expected = [e, e, e / 2.0, e / 6.0];
    for (i, (row, p)) in rows.iter().zip(expected).enumerate() {
        assert_eq!(row["k"], i.to_string());
        assert!((num(&row["pmf"]) - p).abs() < 1e-16);
    }
}

#[test]
fn prob_single_point() {
    let rows = records(&stdout(&["prob", "--lambda", "1", "--log10-n", "0"]));
    assert_eq!(rows[0]["i_best"], "0");
    assert!((num(&rows[0]["p_two_point"]) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
}

#[test]
fn modes_n_one_row_has_null_kimber() {
    let out = run(&["modes", "--lambda", "1", "--log10-n", "0"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let rows = records(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows[0]["i_n"], "0");
    assert_eq!(rows[0]["kimber"], "null");
}

#[test]
fn point_n_one() {
    let rows = records(&stdout(&["point", "--lambda", "1", "--log10-n", "0"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["i_n"], "0");
    assert!((num(&rows[0]["p_mode"]) - (-1.0f64).exp()).abs() < 1e-16);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["modes", "--lambda", "0.5,5", "--log10-n-range", "0:40:0.5", "--format", "json"];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let single = Command::new(env!("CARGO_BIN_EXE_poisson-maxima"))
        .args(args)
        .env("POISSON_MAXIMA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(single.stdout).unwrap(), a);
}

#[test]
fn point_agrees_with_modes_and_prob() {
    let point = &records(&stdout(&["point", "--lambda", "2", "--log10-n", "10"]))[0];
    let modes = &records(&stdout(&["modes", "--lambda", "2", "--log10-n", "10"]))[0];
    let prob = &records(&stdout(&["prob", "--lambda", "2", "--log10-n", "10"]))[0];
    for key in ["lambda", "log10_n", "i_n", "x0", "x1", "kimber", "beta_n", "continuous_root", "err_x0", "err_x1"] {
        assert_eq!(point[key], modes[key], "{key}");
    }
    assert_eq!(point["i_n"], prob["i_best"]);
    assert_eq!(point["p_two_point"], prob["p_two_point"]);
}

#[test]
fn json_is_array_of_flat_objects_with_identical_keys() {
    let text = stdout(&["prob", "--lambda", "1,2", "--log10-n-range", "0:3:1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = value.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let keys: Vec<Vec<&String>> = rows.iter().map(|r| r.as_object().unwrap().keys().collect()).collect();
    assert!(keys.windows(2).all(|w| w[0] == w[1]));
    assert!(rows.iter().all(|r| r.as_object().unwrap().values().all(|v| !v.is_object() && !v.is_array())));
}

#[test]
fn rows_are_ordered_by_lambda_then_n() {
    let rows = records(&stdout(&["prob", "--lambda", "5,0.5", "--log10-n", "3,1"]));
    let keys: Vec<(f64, f64)> = rows.iter().map(|r| (num(&r["lambda"]), num(&r["log10_n"]))).collect();
    assert_eq!(keys, vec![(0.5, 1.0), (0.5, 3.0), (5.0, 1.0), (5.0, 3.0)]);
}

#[test]
fn integer_n_flag() {
    let a = records(&stdout(&["prob", "--lambda", "1", "--n", "1000"]));
    assert_eq!(num(&a[0]["log10_n"]), 3.0);
    assert!(run(&["prob", "--lambda", "1", "--n", "0"]).status.code() == Some(2));
    assert!(run(&["prob", "--lambda", "1", "--n", "1000000000000001"]).status.code() == Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("pm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let out = run(&["prob", "--lambda", "1", "--log10-n", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, stdout(&["prob", "--lambda", "1", "--log10-n", "2"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &[],
        &["bogus"],
        &["prob", "--lambda", "1"],
        &["prob", "--lambda", "-1", "--log10-n", "1"],
        &["prob", "--lambda", "1", "--log10-n", "-1"],
        &["prob", "--lambda", "1", "--log10-n", "41"],
        &["prob", "--lambda", "1", "--log10-n-range", "2:1:0.1"],
        &["prob", "--lambda", "1", "--log10-n-range", "0:1"],
        &["prob", "--lambda", "1", "--log10-n", "1", "--n", "10"],
        &["prob", "--lambda", "1", "--log10-n", "1", "--format", "xml"],
        &["point", "--lambda", "1,2", "--log10-n", "1"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    let bad_env = Command::new(env!("CARGO_BIN_EXE_poisson-maxima"))
        .args(["prob", "--lambda", "1", "--log10-n", "1"])
        .env("POISSON_MAXIMA_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let out = run(&["prob", "--lambda", "1", "--log10-n", "1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
}
