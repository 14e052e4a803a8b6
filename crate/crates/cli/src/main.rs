mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ltlsketch::ltl::{build_table, check_consistency, Propositions, Sample, Sketch, SyntaxDag};
use ltlsketch::reduction::reduce_cnf;
use ltlsketch::sat::{Backend, ExternalSolver};
use ltlsketch::sketcher::{Limits, Sketcher};
use ltlsketch::text::{
    format_dag, format_formula, format_word, parse_formula, parse_ltl, parse_word, read_dimacs, read_sample,
    write_sample,
};
use ltlsketch_bench::{
    generate_instances, load_instances, run_suite, save_instances, summarize, write_csv, write_json, Algo, Counts,
    GenParams, SketchKind,
};
use serde_json::json;

use report::{existence_report, sketch_report, Report};

#[derive(Parser)]
#[command(name = "ltlsketch", version, about = "Complete LTL sketches against samples of lasso words")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    #[arg(long, value_enum, default_value_t = SolverKind::Embedded, global = true)]
    solver: SolverKind,
    /// Solver binary for `--solver external`.
    #[arg(long, env = "LTLSKETCH_SOLVER", global = true)]
    solver_path: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Wall-clock budget in seconds for one algorithm run.
    #[arg(long, value_parser = parse_timeout, global = true)]
    timeout: Option<Duration>,
    /// Largest size bound tried by the size loop.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    max_n: u64,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverKind {
    Embedded,
    External,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Learn,
    Incr,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Learn => Algo::Learn,
            AlgoArg::Incr => Algo::Incr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Type0,
    Type12,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the sketch has a completion consistent with the sample.
    Decide {
        #[arg(long)]
        sketch: PathBuf,
        #[arg(long)]
        sample: PathBuf,
        /// Only allow propositions as images of Type-0 placeholders.
        #[arg(long)]
        restricted: bool,
    },
    /// Complete the sketch into a consistent formula.
    Sketch {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long)]
        sketch: PathBuf,
        #[arg(long)]
        sample: PathBuf,
    },
    /// Learn a consistent formula of least size.
    Learn {
        #[arg(long)]
        sample: PathBuf,
    },
    /// Check a formula file against a sample.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        sample: PathBuf,
    },
    /// Print the satisfaction table of a formula on one word.
    Table {
        #[arg(long)]
        formula: String,
        /// A word such as `{p,q} {p} | {q}`.
        #[arg(long)]
        word: String,
    },
    /// Turn a DIMACS CNF into `PREFIX.sketch` and `PREFIX.sample`.
    Reduce {
        #[arg(long)]
        dimacs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate and run benchmark instances.
    Bench {
        #[command(subcommand)]
        action: BenchCommand,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Write generated instances and a manifest into a directory.
    Gen {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 24)]
        count: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Type12)]
        kind: KindArg,
        #[arg(long, default_value_t = 3)]
        positives: usize,
        #[arg(long, default_value_t = 3)]
        negatives: usize,
        #[arg(long, default_value_t = 8)]
        max_u: usize,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        max_v: u64,
        #[arg(long, default_value_t = 0.5, value_parser = parse_density)]
        density: f64,
    },
    /// Run algorithms on an instance directory.
    Run {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [AlgoArg::Learn, AlgoArg::Incr])]
        algos: Vec<AlgoArg>,
        /// Parallel runs; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_timeout(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|_| format!("`{s}` is not a number of seconds"))?;
    if !(secs > 0.0 && secs.is_finite()) {
        return Err("timeout must be positive".into());
    }
    Ok(Duration::from_secs_f64(secs))
}

fn parse_density(s: &str) -> Result<f64, String> {
    let d: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(0.0..=1.0).contains(&d) {
        return Err("density must lie in [0, 1]".into());
    }
    Ok(d)
}

impl Config {
    fn sketcher(&self) -> Result<Sketcher> {
        let backend = match (self.solver, &self.solver_path) {
            (SolverKind::Embedded, _) => Backend::Embedded,
            (SolverKind::External, Some(path)) => Backend::External(ExternalSolver::new(path)),
            (SolverKind::External, None) => bail!("--solver external needs --solver-path or LTLSKETCH_SOLVER"),
        };
        let limits = Limits { max_n: self.max_n as usize, timeout: self.timeout };
        Ok(Sketcher::new(backend, self.seed, limits))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_sketch(path: &Path) -> Result<Sketch> {
    parse_formula(&read(path)?).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn load_formula(path: &Path) -> Result<SyntaxDag> {
    parse_ltl(&read(path)?).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn load_sample(path: &Path) -> Result<Sample> {
    read_sample(&read(path)?).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn run(cli: &Cli) -> Result<Report> {
    let config = &cli.config;
    match &cli.command {
        Command::Decide { sketch, sample, restricted } => {
            let (sk, s) = (load_sketch(sketch)?, load_sample(sample)?);
            let result = config.sketcher()?.decide_existence(&sk, &s, *restricted)?;
            Ok(existence_report(&sk, &result, *restricted))
        }
        Command::Sketch { algo, sketch, sample } => {
            let (sk, s) = (load_sketch(sketch)?, load_sample(sample)?);
            let sketcher = config.sketcher()?;
            let algo = Algo::from(*algo);
            let result = match algo {
                Algo::Learn => sketcher.complete_via_learning(&sk, &s)?,
                Algo::Incr => sketcher.complete_incremental(&sk, &s)?,
            };
            Ok(sketch_report("sketch", Some(algo.as_str()), &result))
        }
        Command::Learn { sample } => {
            let result = config.sketcher()?.learn_minimal(&load_sample(sample)?)?;
            Ok(sketch_report("learn", None, &result))
        }
        Command::Eval { formula, sample } => {
            let start = Instant::now();
            let (f, s) = (load_formula(formula)?, load_sample(sample)?);
            let verdict = check_consistency(&f, &s)?;
            let consistent = verdict.consistent();
            let mut text = format!("formula: {}\n", format_dag(&f));
            for (class, words, oks) in
                [("positive", s.positives(), &verdict.positives), ("negative", s.negatives(), &verdict.negatives)]
            {
                for (w, ok) in words.iter().zip(oks) {
                    let mark = if *ok { "ok" } else { "WRONG" };
                    text += &format!("{mark:5} {class} {}\n", format_word(w, s.props()));
                }
            }
            text += &format!("consistent: {consistent}\n");
            let json = json!({
                "command": "eval",
                "formula": format_dag(&f),
                "dag_size": f.size(),
                "consistent": consistent,
                "positives": verdict.positives,
                "negatives": verdict.negatives,
                "elapsed_ms": report::millis(start.elapsed()),
            });
            Ok(Report { code: if consistent { 0 } else { 1 }, text, json })
        }
        Command::Table { formula, word } => {
            let start = Instant::now();
            let f = parse_ltl(formula).map_err(|e| anyhow!("formula:{e}"))?;
            let mut props = Propositions::new(f.propositions_in_order())?;
            let w = parse_word(word, |name| match props.index_of(name) {
                Some(i) => Ok(i),
                None => props.push(name.into()).map_err(|e| e.to_string()),
            })
            .map_err(|e| anyhow!("word:{e}"))?;
            let table = build_table(&f, &w, &props)?;
            let sizes = f.subformula_sizes();
            let mut order: Vec<usize> = (0..f.size()).collect();
            order.sort_by_key(|&i| (sizes[i], i));
            let rows: Vec<(String, String)> =
                order.iter().map(|&i| (format_dag(&f.subformula(i)), table.row_bits(i))).collect();
            let width = rows.iter().map(|(s, _)| s.chars().count()).max().unwrap_or(0);
            let mut text = format!("word: {}\n", format_word(&w, &props));
            for (sub, bits) in &rows {
                text += &format!("{sub:width$}  {bits}\n");
            }
            let json = json!({
                "command": "table",
                "formula": format_dag(&f),
                "word": format_word(&w, &props),
                "width": table.width(),
                "rows": rows.iter().map(|(sub, bits)| json!({"subformula": sub, "bits": bits})).collect::<Vec<_>>(),
                "elapsed_ms": report::millis(start.elapsed()),
            });
            Ok(Report { code: 0, text, json })
        }
        Command::Reduce { dimacs, out } => {
            let start = Instant::now();
            let cnf = read_dimacs(&read(dimacs)?).map_err(|e| anyhow!("{}:{e}", dimacs.display()))?;
            let inst = reduce_cnf(&cnf)?;
            let sketch_path = PathBuf::from(format!("{}.sketch", out.display()));
            let sample_path = PathBuf::from(format!("{}.sample", out.display()));
            fs::write(&sketch_path, format_formula(&inst.sketch) + "\n")
                .with_context(|| format!("cannot write {}", sketch_path.display()))?;
            fs::write(&sample_path, write_sample(&inst.sample))
                .with_context(|| format!("cannot write {}", sample_path.display()))?;
            if inst.trivially_unsat {
                eprintln!("warning: the CNF has an empty clause; the written instance omits it and is unsatisfiable only by fiat");
            }
            let text = format!(
                "sketch: {}\nsample: {}\nvariables: {}\nnegative words: {}\n",
                sketch_path.display(),
                sample_path.display(),
                inst.num_vars,
                inst.sample.negatives().len()
            );
            let json = json!({
                "command": "reduce",
                "sketch": sketch_path.display().to_string(),
                "sample": sample_path.display().to_string(),
                "num_vars": inst.num_vars,
                "negatives": inst.sample.negatives().len(),
                "trivially_unsat": inst.trivially_unsat,
                "skipped_tautologies": inst.skipped_tautologies,
                "elapsed_ms": report::millis(start.elapsed()),
            });
            Ok(Report { code: 0, text, json })
        }
        Command::Bench { action } => bench(config, action),
    }
}

fn bench(config: &Config, action: &BenchCommand) -> Result<Report> {
    let start = Instant::now();
    match action {
        BenchCommand::Gen { out, count, kind, positives, negatives, max_u, max_v, density } => {
            let kind = match kind {
                KindArg::Type0 => SketchKind::Type0,
                KindArg::Type12 => SketchKind::Type12,
            };
            let params = GenParams { max_u: *max_u, max_v: *max_v as usize, density: *density, ..GenParams::default() };
            let counts = Counts { positives: *positives, negatives: *negatives };
            let instances = generate_instances(*count, kind, counts, &params, config.seed)?;
            save_instances(out, &instances)?;
            let text = format!("wrote {} {} instances to {}\n", instances.len(), kind.as_str(), out.display());
            let json = json!({
                "command": "bench gen",
                "dir": out.display().to_string(),
                "kind": kind.as_str(),
                "instances": instances.iter().map(|i| i.id.clone()).collect::<Vec<_>>(),
                "elapsed_ms": report::millis(start.elapsed()),
            });
            Ok(Report { code: 0, text, json })
        }
        BenchCommand::Run { dir, algos, jobs, csv, json: json_path } => {
            let instances = load_instances(dir)?;
            let algos: Vec<Algo> = algos.iter().map(|&a| a.into()).collect();
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let records = run_suite(&instances, &algos, &config.sketcher()?, jobs);
            if let Some(path) = csv {
                let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
                write_csv(&records, file)?;
            }
            if let Some(path) = json_path {
                let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
                write_json(&records, file)?;
            }
            let summary = summarize(&records);
            let mut text = format!("{} instances, {} runs\n", instances.len(), records.len());
            for s in &summary {
                text += &format!(
                    "{:5}  completed {:3}  no-solution {:3}  limits {:3}  errors {:3}  recovered {:3}  total {:.1} ms\n",
                    s.algo, s.completed, s.no_solution, s.limits, s.errors, s.recovered, s.total_ms
                );
            }
            let json = json!({
                "command": "bench run",
                "instances": instances.len(),
                "summary": summary,
                "elapsed_ms": report::millis(start.elapsed()),
            });
            Ok(Report { code: 0, text, json })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = match cli.config.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("json values serialize") + "\n",
            };
            // A closed pipe downstream is not an error of ours.
            let _ = io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
