use jsonschema::{Registry, Resource, Validator};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_degflag");
const BASE: &str = "https://degflag.invalid/schemas/";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("DEGFLAG_THREADS").output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).unwrap()
}

fn load(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn validator(name: &str) -> Validator {
    let common = load("common.json");
    let registry = Registry::new().add(format!("{BASE}common.json"), Resource::from_contents(common)).unwrap().prepare().unwrap();
    jsonschema::options().with_registry(&registry).build(&load(name)).unwrap()
}

fn assert_valid(schema: &str, v: &Value) {
    let val = validator(schema);
    let errs: Vec<String> = val.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errs.is_empty(), "{schema}: {errs:?}");
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn cells_examples() {
    let v = json(&["cells", "--n", "2"]);
    assert_valid("cells.json", &v);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["poincare_text"], "1 + t");

    let v = json(&["cells", "--n", "4"]);
    assert_valid("cells.json", &v);
    assert_eq!(v["rows"].as_array().unwrap().len(), 64);
    assert_eq!(v["poincare"], serde_json::json!([1, 6, 15, 20, 15, 6, 1]));

    let v = json(&["cells", "--n", "3", "--shape", "1"]);
    assert_valid("cells.json", &v);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["poincare"], serde_json::json!([1, 2, 1]));
    for r in v["rows"].as_array().unwrap() {
        assert_eq!(r["label"].as_object().unwrap().len(), 2);
    }

    let v = json(&["cells", "--n", "7", "--counts-only"]);
    assert_valid("cells.json", &v);
    assert!(v["rows"].is_null());
    assert_eq!(v["binomial_check"], true);
}

#[test]
fn cells_guards() {
    assert_eq!(code(&["cells", "--n", "7"]), 3);
    assert_eq!(code(&["cells", "--n", "9", "--counts-only"]), 3);
    assert_eq!(code(&["cells", "--n", "1"]), 2);
    assert_eq!(code(&["cells", "--n", "4", "--shape", "3,1"]), 2);
    assert_eq!(code(&["cells", "--n", "4", "--shape", "4"]), 2);
}

#[test]
fn character_n2_closed_form() {
    let v = json(&["character", "--n", "2", "--lambda", "3"]);
    assert_valid("character.json", &v);
    let terms: Vec<(i64, i64)> = v["character"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["z"][0].as_i64().unwrap(), t["q"].as_i64().unwrap()))
        .collect();
    assert_eq!(terms, vec![(3, 0), (1, 1), (-1, 2), (-3, 3)]);
    assert!(v["character"]["terms"].as_array().unwrap().iter().all(|t| t["coeff"] == "1/1"));
}

#[test]
fn character_oracle_check() {
    let v = json(&["character", "--n", "3", "--lambda", "1,1", "--oracle-check"]);
    assert_valid("character.json", &v);
    assert_eq!(v["oracle"]["equal"], true);
    assert_eq!(v["character"]["dimension"], 8);
    assert_eq!(v["oracle"]["weyl_dimension"], "8");
    assert_eq!(v["character"]["graded_dimensions"], serde_json::json!([1, 3, 4]));
}

#[test]
fn character_eval_n5() {
    let v = json(&["character", "--n", "5", "--lambda", "1,0,0,0", "--eval", "2,3,5,7", "11", "--oracle-check"]);
    assert_valid("character.json", &v);
    assert_eq!(v["mode"], "eval");
    assert_eq!(v["oracle"]["equal"], true);
    assert_eq!(v["value"], v["oracle"]["value"]);
    // 2 + 3/2 q + 5/3 q + 7/5 q + q/7 at q = 11
    assert_eq!(v["value"], "11299/210");
}

#[test]
fn character_errors() {
    assert_eq!(code(&["character", "--n", "6", "--lambda", "1,0,0,0,0"]), 3);
    let o = run(&["character", "--n", "6", "--lambda", "1,0,0,0,0"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--eval"));
    assert_eq!(code(&["character", "--n", "2", "--lambda", "1", "--eval", "1", "1"]), 2);
    assert_eq!(code(&["character", "--n", "3", "--lambda", "1"]), 2);
    assert_eq!(code(&["character", "--n", "3", "--lambda", "1,-1"]), 2);
    assert_eq!(code(&["character", "--n", "3", "--lambda", "1,0", "--eval", "1/0,2", "3"]), 2);
    assert_eq!(code(&["character", "--n", "3", "--lambda", "1,0", "--eval", "0,2", "3"]), 2);
    assert_eq!(code(&["character", "--n", "3", "--lambda", "1,1", "--oracle-check", "--oracle-cap", "4"]), 3);
    assert_eq!(code(&["character", "--n", "8", "--lambda", "1,0,0,0,0,0,0", "--eval", "2,3,5,7,11,13,17", "19"]), 3);
    assert_eq!(code(&["nonsense"]), 2);
}

#[test]
fn semismall_examples() {
    let v = json(&["semismall", "--n", "4"]);
    assert_valid("semismall.json", &v);
    assert_eq!(v["verdict"], "small");

    let v = json(&["--threads", "8", "semismall", "--n", "7"]);
    assert_valid("semismall.json", &v);
    assert_eq!(v["verdict"], "semismall");
    assert!(v["witness_count"].as_u64().unwrap() > 0);

    let v = json(&["--threads", "8", "semismall", "--n", "8", "--timing"]);
    assert_valid("semismall.json", &v);
    assert_eq!(v["verdict"], "not-semismall");
    assert_eq!(v["max_excess"], 2);
    let w = &v["witnesses"][0];
    assert!(w["excess"].as_i64().unwrap() > 0);
    assert!(v["seconds"].as_f64().is_some());

    assert_eq!(code(&["semismall", "--n", "10"]), 3);
}

#[test]
fn verify_examples() {
    let v = json(&["verify", "--n", "3", "--trials", "100"]);
    assert_valid("verify.json", &v);
    assert_eq!(v["all_pass"], true);

    let v = json(&["verify", "--n", "5", "--trials", "20"]);
    assert_valid("verify.json", &v);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["quiver"]["expected_dimension"], 40);
    assert_eq!(v["quiver"]["dimension"], 40);
    let text = run_ok(&["--format", "text", "verify", "--n", "5", "--trials", "5"]);
    assert!(text.contains("10 + 30 = 40"), "{text}");

    let o = run(&["verify", "--n", "2"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_valid("verify.json", &v);
    assert_eq!(v["all_pass"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped"));

    assert_eq!(code(&["verify", "--n", "9"]), 3);
}

#[test]
fn output_is_independent_of_threads() {
    for args in [
        &["cells", "--n", "4"][..],
        &["semismall", "--n", "6", "--max-witnesses", "100"],
        &["verify", "--n", "4", "--trials", "30", "--seed", "7"],
        &["character", "--n", "4", "--lambda", "1,0,1"],
    ] {
        let mut one = vec!["--threads", "1"];
        one.extend_from_slice(args);
        let mut four = vec!["--threads", "4"];
        four.extend_from_slice(args);
        assert_eq!(run_ok(&one), run_ok(&four), "{args:?}");
    }
    let a = Command::new(BIN).args(["verify", "--n", "4", "--trials", "10"]).env("DEGFLAG_THREADS", "3").output().unwrap();
    assert!(a.status.success());
    assert_eq!(String::from_utf8(a.stdout).unwrap(), run_ok(&["verify", "--n", "4", "--trials", "10"]));
}

#[test]
fn seeds_change_samples() {
    let a = json(&["verify", "--n", "4", "--trials", "5", "--seed", "1"]);
    let b = json(&["verify", "--n", "4", "--trials", "5", "--seed", "2"]);
    assert_ne!(a["quiver"]["ranks"], Value::Null);
    assert_eq!(a["all_pass"], b["all_pass"]);
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
}

#[test]
fn csv_and_text_formats() {
    let csv = run_ok(&["--format", "csv", "cells", "--n", "3"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "ordinal,label,dim,relative_dim,diagonal");
    assert_eq!(lines.len(), 9);

    let csv = run_ok(&["--format", "csv", "character", "--n", "2", "--lambda", "2"]);
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.contains("2,0,1/1"));

    let text = run_ok(&["--format", "text", "semismall", "--n", "3"]);
    assert!(text.contains("verdict small"));

    let csv = run_ok(&["--format", "csv", "verify", "--n", "3", "--trials", "3"]);
    assert!(csv.starts_with("suite,checks,failures,note"));
}

#[test]
fn schemas_reject_bad_documents() {
    let v = serde_json::json!({"n": 2, "lambda": [1], "mode": "exact"});
    assert!(!validator("character.json").is_valid(&v));
    let v = serde_json::json!({"n": 2, "lambda": [1], "mode": "eval", "point": {"z": ["1"], "q": "2/1"}, "value": "3/1"});
    assert!(!validator("character.json").is_valid(&v));
    let mut v = json(&["semismall", "--n", "3"]);
    v["verdict"] = "tiny".into();
    assert!(!validator("semismall.json").is_valid(&v));
}
