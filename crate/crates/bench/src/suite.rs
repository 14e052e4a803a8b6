use std::io;
use std::time::Instant;

use ltlsketch::encoding::EncodingStats;
use ltlsketch::ltl::{check_consistency, Propositions, Sample, Sketch, SyntaxDag};
use ltlsketch::sketcher::{SketchResult, Sketcher};
use ltlsketch::text::{format_dag, parse_ltl};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generate::{derive_sketch, generate_sample, Counts, GenParams, Provenance, SketchKind};
use crate::patterns::PATTERNS;
use crate::BenchError;

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub kind: SketchKind,
    pub intended: SyntaxDag,
    pub sketch: Sketch,
    pub sample: Sample,
    pub provenance: Provenance,
    pub seed: u64,
}

/// `count` instances cycling through [`PATTERNS`] over the propositions
/// `p, q`; each gets its own seed drawn from `seed`.
pub fn generate_instances(
    count: usize,
    kind: SketchKind,
    counts: Counts,
    params: &GenParams,
    seed: u64,
) -> Result<Vec<Instance>, BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let instance_seed = rng.next_u64();
            let intended = parse_ltl(PATTERNS[i % PATTERNS.len()]).expect("patterns parse");
            let props = Propositions::new(["p", "q"]).expect("distinct names");
            let sample = generate_sample(&intended, &props, counts, params, instance_seed)?;
            let (sketch, provenance) = derive_sketch(&intended, kind, instance_seed)?;
            Ok(Instance {
                id: format!("{}-{i:04}", kind.as_str()),
                kind,
                intended,
                sketch,
                sample,
                provenance,
                seed: instance_seed,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    /// Existence check, then per-placeholder learning.
    Learn,
    /// Size-incremental search.
    Incr,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Learn => "learn",
            Algo::Incr => "incr",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "learn" => Some(Algo::Learn),
            "incr" => Some(Algo::Incr),
            _ => None,
        }
    }
}

pub const CSV_HEADER: [&str; 13] = [
    "id",
    "kind",
    "algo",
    "status",
    "time_ms",
    "n_final",
    "formula",
    "dag_size",
    "vars",
    "clauses",
    "recovered",
    "consistent",
    "seed",
];

/// One (instance, algorithm) run. `vars` and `clauses` describe the last
/// encoding handed to the solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub id: String,
    pub kind: String,
    pub algo: String,
    pub status: String,
    pub time_ms: f64,
    pub n_final: Option<usize>,
    pub formula: String,
    pub dag_size: Option<usize>,
    pub vars: usize,
    pub clauses: usize,
    pub recovered: bool,
    pub consistent: bool,
    pub seed: u64,
}

fn last_stats(r: &SketchResult) -> Option<EncodingStats> {
    r.iterations.last().map(|i| i.stats).or(r.existence)
}

pub fn run_one(instance: &Instance, algo: Algo, sketcher: &Sketcher) -> BenchRecord {
    let start = Instant::now();
    let outcome = match algo {
        Algo::Learn => sketcher.complete_via_learning(&instance.sketch, &instance.sample),
        Algo::Incr => sketcher.complete_incremental(&instance.sketch, &instance.sample),
    };
    let time_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    let mut record = BenchRecord {
        id: instance.id.clone(),
        kind: instance.kind.as_str().into(),
        algo: algo.as_str().into(),
        status: "error".into(),
        time_ms,
        n_final: None,
        formula: String::new(),
        dag_size: None,
        vars: 0,
        clauses: 0,
        recovered: false,
        consistent: false,
        seed: instance.seed,
    };
    let Ok(result) = outcome else { return record };
    record.status = result.status.as_str().into();
    record.n_final = result.n_final;
    if let Some(stats) = last_stats(&result) {
        record.vars = stats.variables;
        record.clauses = stats.clauses;
    }
    if let Some(f) = &result.formula {
        record.formula = format_dag(f);
        record.dag_size = Some(f.size());
        record.recovered = *f == instance.intended;
        record.consistent = check_consistency(f, &instance.sample).is_ok_and(|v| v.consistent());
    }
    record
}

/// Runs every algorithm on every instance, `jobs` at a time. Records come
/// back in instance order, algorithms in the order given.
pub fn run_suite(instances: &[Instance], algos: &[Algo], sketcher: &Sketcher, jobs: usize) -> Vec<BenchRecord> {
    let work: Vec<(&Instance, Algo)> = instances.iter().flat_map(|i| algos.iter().map(move |&a| (i, a))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    pool.install(|| work.par_iter().map(|&(i, a)| run_one(i, a, sketcher)).collect())
}

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: io::Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(out, records)?;
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AlgoSummary {
    pub algo: String,
    pub runs: usize,
    pub completed: usize,
    pub no_solution: usize,
    pub limits: usize,
    pub errors: usize,
    pub recovered: usize,
    pub total_ms: f64,
}

pub fn summarize(records: &[BenchRecord]) -> Vec<AlgoSummary> {
    let mut out: Vec<AlgoSummary> = Vec::new();
    for r in records {
        let pos = match out.iter().position(|s| s.algo == r.algo) {
            Some(p) => p,
            None => {
                out.push(AlgoSummary { algo: r.algo.clone(), ..Default::default() });
                out.len() - 1
            }
        };
        let s = &mut out[pos];
        s.runs += 1;
        s.total_ms += r.time_ms;
        s.recovered += r.recovered as usize;
        match r.status.as_str() {
            "completed" => s.completed += 1,
            "no-solution" => s.no_solution += 1,
            "error" => s.errors += 1,
            _ => s.limits += 1,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltlsketch::sketcher::Limits;
    use ltlsketch::text::{parse_formula, read_sample};
    use std::time::Duration;

    fn example_1() -> Instance {
        Instance {
            id: "example-1".into(),
            kind: SketchKind::Type0,
            intended: parse_ltl("G p").unwrap(),
            sketch: parse_formula("G ?0").unwrap(),
            sample: read_sample("props: p q\n[positive]\n{p} | {q}\n[negative]\n| {q}\n").unwrap(),
            provenance: Provenance::Formula(parse_ltl("p").unwrap()),
            seed: 0,
        }
    }

    #[test]
    fn example_1_has_no_solution_under_both() {
        let records = run_suite(&[example_1()], &[Algo::Learn, Algo::Incr], &Sketcher::default(), 2);
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.status == "no-solution" && !r.consistent));
    }

    #[test]
    fn empty_suite_writes_only_the_header() {
        let mut buf = Vec::new();
        write_csv(&run_suite(&[], &[Algo::Learn], &Sketcher::default(), 1), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), CSV_HEADER.join(",") + "\n");
    }

    #[test]
    fn generated_instances_complete_consistently() {
        let counts = Counts { positives: 3, negatives: 3 };
        let instances = generate_instances(6, SketchKind::Type12, counts, &GenParams::default(), 11).unwrap();
        let sketcher =
            Sketcher { limits: Limits { max_n: 12, timeout: Some(Duration::from_secs(30)) }, ..Default::default() };
        for r in run_suite(&instances, &[Algo::Incr], &sketcher, 2) {
            assert_eq!(r.status, "completed", "{r:?}");
            assert!(r.consistent);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let counts = Counts { positives: 2, negatives: 2 };
        let a = generate_instances(4, SketchKind::Type0, counts, &GenParams::default(), 3).unwrap();
        let b = generate_instances(4, SketchKind::Type0, counts, &GenParams::default(), 3).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!((&x.sketch, &x.sample, x.seed), (&y.sketch, &y.sample, y.seed));
        }
    }
}
