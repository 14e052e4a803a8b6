//! Satisfiability backends. Every satisfying assignment is checked against
//! all clauses before it is returned.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use batsat::{lbool, BasicCallbacks, BasicSolver, Lit as BLit, SolverInterface, SolverOpts};
use thiserror::Error;

use super::cnf::{Cnf, Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub seed: u64,
    pub timeout: Option<Duration>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Model),
    Unsat,
    Timeout,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }
}

/// Backend answer with an assignment to every variable of the CNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawOutcome {
    Sat(Vec<bool>),
    Unsat,
    Timeout,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("cannot run solver `{path}`: {source}")]
    Launch { path: PathBuf, source: io::Error },
    #[error("solver i/o failed: {0}")]
    Io(#[from] io::Error),
    #[error("unexpected solver output: {0}")]
    Protocol(String),
    #[error("solver returned an assignment that violates clause {clause}")]
    InvalidModel { clause: usize },
}

pub trait SatBackend {
    fn solve_full(&self, cnf: &Cnf, options: &SolveOptions) -> Result<RawOutcome, SolverError>;
}

/// In-process CDCL solver.
#[derive(Clone, Copy, Debug, Default)]
pub struct EmbeddedSolver;

impl SatBackend for EmbeddedSolver {
    fn solve_full(&self, cnf: &Cnf, options: &SolveOptions) -> Result<RawOutcome, SolverError> {
        let opts = SolverOpts { random_seed: (options.seed % 2_147_483_646 + 1) as f64, ..SolverOpts::default() };
        let mut cb = BasicCallbacks::new();
        if let Some(timeout) = options.timeout {
            let deadline = Instant::now() + timeout;
            cb.set_stop(move || Instant::now() >= deadline);
        }
        let mut solver = BasicSolver::new(opts, cb);
        let vars: Vec<_> = (0..cnf.num_vars).map(|_| solver.new_var_default()).collect();
        let mut buf = Vec::new();
        for clause in &cnf.clauses {
            buf.clear();
            buf.extend(clause.iter().map(|l| BLit::new(vars[l.var().index() as usize - 1], l.is_positive())));
            if !solver.add_clause_reuse(&mut buf) {
                return Ok(RawOutcome::Unsat);
            }
        }
        let result = solver.solve_limited(&[]);
        if result == lbool::TRUE {
            let model = solver.get_model();
            Ok(RawOutcome::Sat(vars.iter().map(|v| model[v.idx() as usize] == lbool::TRUE).collect()))
        } else if result == lbool::FALSE {
            Ok(RawOutcome::Unsat)
        } else {
            Ok(RawOutcome::Timeout)
        }
    }
}

/// Solver binary speaking the SAT-competition protocol: it receives a
/// DIMACS file path as its last argument and prints an `s` line and `v`
/// lines. Variables missing from the `v` lines default to false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalSolver {
    pub path: PathBuf,
    pub args: Vec<String>,
}

impl ExternalSolver {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        ExternalSolver { path: path.into(), args: Vec::new() }
    }
}

impl SatBackend for ExternalSolver {
    fn solve_full(&self, cnf: &Cnf, options: &SolveOptions) -> Result<RawOutcome, SolverError> {
        let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
        file.write_all(cnf.to_dimacs().as_bytes())?;
        file.flush()?;
        let mut child = Command::new(&self.path)
            .args(&self.args)
            .arg(file.path())
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| SolverError::Launch { path: self.path.clone(), source })?;
        let mut stdout = child.stdout.take().expect("stdout is piped");
        let reader = std::thread::spawn(move || {
            let mut out = String::new();
            stdout.read_to_string(&mut out).map(|_| out)
        });
        let deadline = options.timeout.map(|t| Instant::now() + t);
        loop {
            if child.try_wait()?.is_some() {
                break;
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(RawOutcome::Timeout);
            }
            std::thread::sleep(Duration::from_millis(2));
        }
        let output = reader.join().map_err(|_| SolverError::Protocol("output reader panicked".into()))??;
        parse_competition_output(&output, cnf.num_vars)
    }
}

fn parse_competition_output(output: &str, num_vars: u32) -> Result<RawOutcome, SolverError> {
    let mut status = None;
    let mut values = vec![false; num_vars as usize];
    for line in output.lines() {
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("s") => {
                status = Some(match fields.collect::<Vec<_>>().join(" ").as_str() {
                    "SATISFIABLE" => Some(true),
                    "UNSATISFIABLE" => Some(false),
                    "UNKNOWN" | "INDETERMINATE" => None,
                    other => return Err(SolverError::Protocol(format!("unknown status `{other}`"))),
                })
            }
            Some("v") => {
                for token in fields {
                    let lit: i64 =
                        token.parse().map_err(|_| SolverError::Protocol(format!("bad literal `{token}`")))?;
                    let var = lit.unsigned_abs() as usize;
                    if var > values.len() {
                        return Err(SolverError::Protocol(format!("literal {lit} is out of range")));
                    }
                    if var > 0 {
                        values[var - 1] = lit > 0;
                    }
                }
            }
            _ => {}
        }
    }
    match status {
        Some(Some(true)) => Ok(RawOutcome::Sat(values)),
        Some(Some(false)) => Ok(RawOutcome::Unsat),
        Some(None) => Ok(RawOutcome::Timeout),
        None => Err(SolverError::Protocol("no `s` status line".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Embedded,
    External(ExternalSolver),
}

impl Backend {
    pub fn solve(&self, cnf: &Cnf, options: &SolveOptions) -> Result<SolveOutcome, SolverError> {
        match self {
            Backend::Embedded => solve(cnf, &EmbeddedSolver, options),
            Backend::External(ext) => solve(cnf, ext, options),
        }
    }
}

/// Runs `backend`, verifies any model against every clause and projects it
/// onto the variables up to the CNF's watermark.
pub fn solve(cnf: &Cnf, backend: &dyn SatBackend, options: &SolveOptions) -> Result<SolveOutcome, SolverError> {
    match backend.solve_full(cnf, options)? {
        RawOutcome::Sat(values) => {
            if values.len() != cnf.num_vars as usize {
                return Err(SolverError::Protocol("assignment has the wrong length".into()));
            }
            if let Some(clause) = cnf.clauses.iter().position(|c| !c.iter().any(|l| l.value(&values))) {
                return Err(SolverError::InvalidModel { clause });
            }
            Ok(SolveOutcome::Sat(Model::new(values[..cnf.watermark as usize].to_vec())))
        }
        RawOutcome::Unsat => Ok(SolveOutcome::Unsat),
        RawOutcome::Timeout => Ok(SolveOutcome::Timeout),
    }
}
