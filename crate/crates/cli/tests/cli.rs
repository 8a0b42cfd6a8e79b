use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitzkit"))
        .args(args)
        .env_remove("HURWITZKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn hurwitz_projective_plane() {
    let out = run(&["hurwitz", "--euler", "1", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "2/3");
    assert_eq!(v["true_hurwitz"], true);
    let out = run(&["hurwitz", "--euler", "1", "--degree", "3", "--profile", "3"]);
    assert_eq!(json(&out)["value"], "1/3");
    let out = run(&["hurwitz", "--euler", "-2", "--degree", "2", "--profile", "2", "--profile", "2", "--cutoff", "1"]);
    assert_eq!(json(&out)["true_hurwitz"], false);
}

#[test]
fn oracle_agrees_and_guards() {
    let out = run(&["oracle", "--surface", "rp2", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "2/3");
    assert_eq!(v["count"], "4");
    let out = run(&["oracle", "--surface", "rp2", "--degree", "7", "--profile", "7", "--profile", "7", "--profile", "7", "--profile", "7"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["hurwitz", "--euler", "1"]).status.code(), Some(2));
    assert_eq!(run(&["hurwitz", "--euler", "1", "--degree", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["hurwitz", "--euler", "1", "--degree", "3", "--profile", "2"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["genfun", "--layout", "prop9", "--dmax", "2"]).status.code(), Some(2));
}

#[test]
fn characters_csv() {
    let out = run(&["characters", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header.len(), 4);
    assert_eq!(header[0], "lambda");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    // the identity class column holds the dimensions 1, 2, 1
    let id = header.iter().position(|h| h == "1,1,1").unwrap();
    let mut dims: Vec<i64> = rows.iter().map(|r| r[id].parse().unwrap()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 2]);
}

#[test]
fn schur_evaluation() {
    let out = run(&["schur", "--lambda", "2", "--p", "1,1"]);
    let v = json(&out);
    assert_eq!(v["poly"]["1,1"], "1/2");
    assert_eq!(v["poly"]["2"], "1/2");
    assert_eq!(v["value"], "1/1");
}

#[test]
fn genfun_layout_series() {
    let out = run(&["genfun", "--layout", "prop1", "--n", "2", "--dmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let terms = v.as_array().unwrap();
    assert!(!terms.is_empty());
    for t in terms {
        assert!(t["degree"].as_u64().unwrap() <= 3);
        assert!(t["coeff"].as_str().unwrap().contains('/'));
        assert!(t["profiles"].is_array());
        assert!(t["aux"].is_array());
    }
    let out = run(&["genfun", "--euler", "2", "--alphabets", "2", "--dmax", "1"]);
    let v = json(&out);
    let degree_one: Vec<&Value> = v.as_array().unwrap().iter().filter(|t| t["degree"] == 1).collect();
    assert_eq!(degree_one.len(), 1);
    assert_eq!(degree_one[0]["coeff"], "1/1");
    assert_eq!(run(&["genfun", "--euler", "2", "--dmax", "9"]).status.code(), Some(3));
}

#[test]
fn hirota_report() {
    let out = run(&["hirota", "--content", "linear:1/2", "--N", "2", "--dmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    assert_eq!(run(&["hirota", "--N", "2", "--dmax", "7"]).status.code(), Some(3));
}

#[test]
fn mc_relation_json_shape() {
    let out = run(&["mc", "--relation", "sAZBZ+", "--lambda", "2", "--N", "3", "--samples", "20000", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["mean"].as_array().unwrap().len(), 2);
    // s_(2)(I_3)^2 / s_(2)(p_∞) = 36 / (1/2)
    assert_eq!(v["exact"][0].as_f64().unwrap(), 72.0);
    assert!(v["stderr"].as_f64().unwrap() > 0.0);
    assert!(v["sigmas"].as_f64().unwrap() <= 5.0);
    assert_eq!(v["pass"], true);
}

#[test]
fn mc_is_reproducible_across_thread_counts() {
    let args = ["mc", "--relation", "sAUBU-1", "--lambda", "1,1", "--N", "2", "--a", "1,2;0,1", "--samples", "10000", "--seed", "7"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let three = Command::new(env!("CARGO_BIN_EXE_hurwitzkit"))
        .args(args)
        .env("HURWITZKIT_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(json(&one)["mean"], json(&three)["mean"]);
    assert_eq!(json(&one)["stderr"], json(&three)["stderr"]);
}

#[test]
fn mc_layout_and_gate_failure() {
    let out = run(&["mc", "--layout", "prop2", "--N", "2", "--c", "2,1/2;0,-1", "--p", "1,1/3", "--dmax", "1", "--samples", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["degrees"][1]["exact_rational"], "2/1");
    // scalar case of Z_1 C_1 Z_2 C_2 Z_1† Z_2†: the stated sum gives 2 at degree 2, Wick gives E|z|^4 E|z|^4 = 4
    let out = run(&[
        "mc", "--layout", "prop2", "--n", "2", "--t", "2", "--N", "1", "--c", "1", "--c", "1", "--p", "1,1", "--dmax", "2",
        "--samples", "20000", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v["degrees"][2]["exact_rational"], "2/1");
    let mean = v["degrees"][2]["mean"][0].as_f64().unwrap();
    assert!((mean - 4.0).abs() < 1.0, "{mean}");
    assert_eq!(run(&["mc", "--N", "2"]).status.code(), Some(2));
    assert_eq!(run(&["mc", "--relation", "sAZBZ+", "--lambda", "5", "--N", "2"]).status.code(), Some(3));
}

#[test]
fn quick_selftest_passes() {
    let out = run(&["selftest", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["exact"].as_array().unwrap().len() > 20);
}
