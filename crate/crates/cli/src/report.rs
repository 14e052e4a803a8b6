use std::time::Duration;

use ltlsketch::encoding::EncodingStats;
use ltlsketch::ltl::{Image, Sketch, Substitution};
use ltlsketch::sketcher::{Answer, ExistenceResult, SketchResult, Status};
use ltlsketch::text::format_dag;
use serde_json::{json, Map, Value};

/// Command outcome: exit code plus both renderings.
pub struct Report {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

pub fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn stats_json(s: &EncodingStats) -> Value {
    json!({
        "variables": s.variables,
        "cnf_variables": s.cnf_variables,
        "clauses": s.clauses,
        "y_vars": s.y_vars,
        "x_vars": s.x_vars,
        "l_vars": s.l_vars,
        "r_vars": s.r_vars,
        "c_vars": s.c_vars,
        "n": s.n,
    })
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Completed => 0,
        Status::NoSolution => 1,
        Status::ResourceLimit | Status::Timeout => 3,
    }
}

fn image_text(image: &Image) -> String {
    match image {
        Image::Formula(f) => format_dag(f),
        Image::Unary(op) => op.symbol().into(),
        Image::Binary(op) => op.symbol().into(),
    }
}

fn substitution_json(sketch: &Sketch, subst: &Substitution) -> Value {
    let mut map = Map::new();
    for (id, image) in subst.iter() {
        let tag = sketch.kind_of(id).map_or("?", |k| k.tag());
        let key = match sketch.name(id) {
            Some(name) => format!("{tag}{{{name}}}"),
            None => format!("{tag}{id}"),
        };
        map.insert(key, Value::String(image_text(image)));
    }
    Value::Object(map)
}

pub fn existence_report(sketch: &Sketch, result: &ExistenceResult, restricted: bool) -> Report {
    let (code, verdict) = match result.exists {
        Some(true) => (0, "exists"),
        Some(false) => (1, "no-solution"),
        None => (3, "timeout"),
    };
    let substitution = result.decoding.as_ref().map(|d| match &d.restricted {
        Some(full) => substitution_json(sketch, full),
        None => substitution_json(sketch, &d.operators),
    });
    let mut text = format!("{verdict}\n");
    if let Some(Value::Object(map)) = &substitution {
        for (k, v) in map {
            text += &format!("{k} := {}\n", v.as_str().unwrap_or_default());
        }
    }
    text += &format!("variables: {}  clauses: {}\n", result.stats.variables, result.stats.clauses);
    let json = json!({
        "command": "decide",
        "restricted": restricted,
        "status": verdict,
        "exists": result.exists,
        "substitution": substitution,
        "stats": stats_json(&result.stats),
        "elapsed_ms": millis(result.elapsed),
    });
    Report { code, text, json }
}

pub fn sketch_report(command: &str, algo: Option<&str>, result: &SketchResult) -> Report {
    let formula = result.formula.as_ref().map(format_dag);
    let last = result.iterations.last().map(|i| i.stats).or(result.existence);
    let mut text = format!("status: {}\n", result.status.as_str());
    if let (Some(f), Some(dag)) = (&formula, &result.formula) {
        text += &format!("formula: {f}\nsize: {}\n", dag.size());
    }
    if let Some(n) = result.n_final {
        text += &format!("n_final: {n}\n");
    }
    let iterations: Vec<Value> = result
        .iterations
        .iter()
        .map(|i| {
            let answer = match i.answer {
                Answer::Sat => "sat",
                Answer::Unsat => "unsat",
                Answer::Timeout => "timeout",
            };
            json!({"n": i.n, "answer": answer, "stats": stats_json(&i.stats)})
        })
        .collect();
    let json = json!({
        "command": command,
        "algo": algo,
        "status": result.status.as_str(),
        "exists": result.exists,
        "formula": formula,
        "dag_size": result.formula.as_ref().map(|f| f.size()),
        "n_final": result.n_final,
        "existence": result.existence.as_ref().map(stats_json),
        "stats": last.as_ref().map(stats_json),
        "iterations": iterations,
        "elapsed_ms": millis(result.elapsed),
    });
    Report { code: status_code(result.status), text, json }
}
