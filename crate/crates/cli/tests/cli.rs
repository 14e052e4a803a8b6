use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltlsketch")).args(args).env_remove("LTLSKETCH_SOLVER").output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

fn without_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn exit_codes() {
    let ex1 = ["--sketch", &data("example1.sketch"), "--sample", &data("example1.sample")].map(String::from);
    let ex1: Vec<&str> = ex1.iter().map(String::as_str).collect();
    assert_eq!(run(&[&["decide"], ex1.as_slice()].concat()).status.code(), Some(1));
    assert_eq!(run(&[&["sketch", "--algo", "incr"], ex1.as_slice()].concat()).status.code(), Some(1));
    assert_eq!(run(&["learn", "--sample", &data("example2.sample")]).status.code(), Some(0));
    assert_eq!(
        run(&["eval", "--formula", &data("example2.formula"), "--sample", &data("example2.sample")]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["eval", "--formula", &data("example1.sketch"), "--sample", &data("example1.sample")]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["decide", "--sketch", "missing", "--sample", "missing"]).status.code(), Some(2));
    assert_eq!(run(&["--timeout", "0", "learn", "--sample", &data("example2.sample")]).status.code(), Some(2));
    assert_eq!(run(&["--max-n", "0", "learn", "--sample", &data("example2.sample")]).status.code(), Some(2));
    assert_eq!(run(&["--solver", "external", "learn", "--sample", &data("example2.sample")]).status.code(), Some(2));
}

#[test]
fn size_bound_exhaustion_is_a_resource_limit() {
    let (code, v) = json(&[
        "--max-n",
        "5",
        "sketch",
        "--algo",
        "incr",
        "--sketch",
        &data("example2.sketch"),
        "--sample",
        &data("example2.sample"),
    ]);
    assert_eq!((code, v["status"].as_str()), (3, Some("resource-limit")));
}

#[test]
fn json_is_deterministic() {
    let args = [
        "--seed",
        "3",
        "sketch",
        "--algo",
        "learn",
        "--sketch",
        &data("example2.sketch"),
        "--sample",
        &data("example2.sample"),
    ];
    let (code, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(without_elapsed(a.clone()), without_elapsed(b));
    assert!(a["elapsed_ms"].is_number());
    assert!(a["stats"]["variables"].as_u64().unwrap() > 0);
    assert_eq!(a["dag_size"], 4);
}

#[test]
fn reduce_writes_a_decidable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("small").display().to_string();
    let (code, v) = json(&["reduce", "--dimacs", &data("small.cnf"), "--out", &prefix]);
    assert_eq!((code, v["num_vars"].as_u64()), (0, Some(3)));
    let (code, v) =
        json(&["decide", "--restricted", "--sketch", &(prefix.clone() + ".sketch"), "--sample", &(prefix + ".sample")]);
    assert_eq!(code, 0);
    // (x1 | x2) & (!x1 | x3) & !x2 forces x1 = x3 = true, x2 = false.
    let subst = v["substitution"].as_object().unwrap();
    assert_eq!(subst["?0{x1}"], "q");
    assert_eq!(subst["?0{x2}"], "p");
    assert_eq!(subst["?0{x3}"], "q");
}

#[test]
fn bench_generates_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst").display().to_string();
    let csv = dir.path().join("out.csv").display().to_string();
    let out = run(&["--seed", "5", "bench", "gen", "--out", &inst, "--count", "4", "--kind", "type12"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (code, v) = json(&["--timeout", "30", "bench", "run", "--dir", &inst, "--jobs", "2", "--csv", &csv]);
    assert_eq!((code, v["instances"].as_u64()), (0, Some(4)));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("id,kind,algo,status,time_ms,n_final,formula,dag_size,vars,clauses,recovered,consistent,seed")
    );
    assert_eq!(lines.count(), 8);
}

#[test]
fn table_accepts_names_missing_from_the_formula() {
    let (code, v) = json(&["table", "--formula", "F p", "--word", "{r} | {p,r}"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"][1]["bits"], "11");
    assert_eq!(run(&["table", "--formula", "F ?0", "--word", "| {p}"]).status.code(), Some(2));
}
