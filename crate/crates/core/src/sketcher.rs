//! Decision procedure and completion algorithms for sketches.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::encoding::{
    decode_existence_model, decode_sized_model, encode_existence, encode_sized, EncodeError, EncodingStats,
    ExistenceDecoding,
};
use crate::lasso::comparison_bound;
use crate::ltl::{
    apply_substitution, check_consistency, BinaryOp, DagBuilder, HoleKind, Image, Label, PlaceholderId, Sample, Sketch,
    SyntaxDag, UnaryOp,
};
use crate::sat::{Backend, SolveOptions, SolveOutcome, SolverError};

#[derive(Debug, Error)]
pub enum SketcherError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_n: usize,
    pub timeout: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_n: 30, timeout: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Completed,
    NoSolution,
    ResourceLimit,
    Timeout,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Completed => "completed",
            Status::NoSolution => "no-solution",
            Status::ResourceLimit => "resource-limit",
            Status::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Sat,
    Unsat,
    Timeout,
}

/// One solver call of the size loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Iteration {
    pub n: usize,
    pub answer: Answer,
    pub stats: EncodingStats,
}

#[derive(Clone, Debug)]
pub struct SketchResult {
    pub status: Status,
    /// Present iff `status` is `Completed`; always consistent with the sample.
    pub formula: Option<SyntaxDag>,
    /// Size bound of the last satisfiable `Φ_n` (size-loop results only).
    pub n_final: Option<usize>,
    pub existence: Option<EncodingStats>,
    /// Verdict of the existence check, `None` if it was skipped or timed out.
    pub exists: Option<bool>,
    pub iterations: Vec<Iteration>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct ExistenceResult {
    /// `None` when the solver ran out of time.
    pub exists: Option<bool>,
    pub decoding: Option<ExistenceDecoding>,
    pub stats: EncodingStats,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct Sketcher {
    pub backend: Backend,
    pub seed: u64,
    pub limits: Limits,
}

struct Clock {
    start: Instant,
    budget: Option<Duration>,
}

impl Clock {
    fn new(budget: Option<Duration>) -> Self {
        Clock { start: Instant::now(), budget }
    }

    /// Remaining budget, or `Err(())` if it is used up.
    fn remaining(&self) -> Result<Option<Duration>, ()> {
        match self.budget {
            None => Ok(None),
            Some(b) => b.checked_sub(self.start.elapsed()).filter(|d| !d.is_zero()).map(Some).ok_or(()),
        }
    }
}

impl Sketcher {
    pub fn new(backend: Backend, seed: u64, limits: Limits) -> Self {
        Sketcher { backend, seed, limits }
    }

    fn options(&self, timeout: Option<Duration>) -> SolveOptions {
        SolveOptions { seed: self.seed, timeout }
    }

    fn existence(
        &self,
        sketch: &Sketch,
        sample: &Sample,
        restricted: bool,
        clock: &Clock,
    ) -> Result<ExistenceResult, SketcherError> {
        let start = Instant::now();
        let enc = encode_existence(sketch, sample, restricted)?;
        let cnf = enc.to_cnf();
        let stats = enc.stats(&cnf);
        let Ok(timeout) = clock.remaining() else {
            return Ok(ExistenceResult { exists: None, decoding: None, stats, elapsed: start.elapsed() });
        };
        let (exists, decoding) = match self.backend.solve(&cnf, &self.options(timeout))? {
            SolveOutcome::Sat(model) => {
                (Some(true), Some(decode_existence_model(&model, &enc.catalog, sketch, sample)?))
            }
            SolveOutcome::Unsat => (Some(false), None),
            SolveOutcome::Timeout => (None, None),
        };
        Ok(ExistenceResult { exists, decoding, stats, elapsed: start.elapsed() })
    }

    /// Whether some complete (restricted, if asked) substitution makes the
    /// sketch consistent with the sample.
    pub fn decide_existence(
        &self,
        sketch: &Sketch,
        sample: &Sample,
        restricted: bool,
    ) -> Result<ExistenceResult, SketcherError> {
        self.existence(sketch, sample, restricted, &Clock::new(self.limits.timeout))
    }

    /// Existence check, then one minimal-size learning problem per Type-0
    /// placeholder built from the suffix labels of the model.
    pub fn complete_via_learning(&self, sketch: &Sketch, sample: &Sample) -> Result<SketchResult, SketcherError> {
        let clock = Clock::new(self.limits.timeout);
        let mut result = SketchResult {
            status: Status::NoSolution,
            formula: None,
            n_final: None,
            existence: None,
            exists: None,
            iterations: Vec::new(),
            elapsed: Duration::ZERO,
        };
        let ex = self.existence(sketch, sample, false, &clock)?;
        result.existence = Some(ex.stats);
        result.exists = ex.exists;
        let decoding = match ex.exists {
            None => return Ok(finish(result, Status::Timeout, &clock)),
            Some(false) => return Ok(finish(result, Status::NoSolution, &clock)),
            Some(true) => ex.decoding.expect("satisfiable existence check is decoded"),
        };
        let mut subst = decoding.operators;
        for labeling in decoding.labelings {
            let sub_sample = Sample::new(sample.props().clone(), labeling.positives, labeling.negatives)
                .map_err(|e| SketcherError::Internal(e.to_string()))?;
            let learned = self.size_loop(&Sketch::from_formula_hole(), &sub_sample, &clock)?;
            result.iterations.extend(learned.iterations);
            match learned.status {
                Status::Completed => {
                    subst.insert(labeling.placeholder, Image::Formula(learned.formula.expect("completed")));
                }
                status => return Ok(finish(result, status, &clock)),
            }
        }
        let formula = apply_substitution(sketch, &subst).map_err(|e| SketcherError::Internal(e.to_string()))?;
        verify(&formula, sample)?;
        result.formula = Some(formula);
        Ok(finish(result, Status::Completed, &clock))
    }

    /// Existence check, then `Φ_n` for `n = |φ?|, |φ?|+1, …` until one is
    /// satisfiable or `max_n` is passed.
    pub fn complete_incremental(&self, sketch: &Sketch, sample: &Sample) -> Result<SketchResult, SketcherError> {
        let clock = Clock::new(self.limits.timeout);
        let ex = self.existence(sketch, sample, false, &clock)?;
        let gate = match ex.exists {
            None => Some(Status::Timeout),
            Some(false) => Some(Status::NoSolution),
            Some(true) => None,
        };
        if let Some(status) = gate {
            let result = SketchResult {
                status,
                formula: None,
                n_final: None,
                existence: Some(ex.stats),
                exists: ex.exists,
                iterations: Vec::new(),
                elapsed: Duration::ZERO,
            };
            return Ok(finish(result, status, &clock));
        }
        let mut result = self.size_loop(sketch, sample, &clock)?;
        result.existence = Some(ex.stats);
        result.exists = ex.exists;
        Ok(result)
    }

    /// A consistent formula of least encoding size, i.e. the size loop on
    /// the sketch `?0`. A valid sample always admits one, so no existence
    /// check is run.
    pub fn learn_minimal(&self, sample: &Sample) -> Result<SketchResult, SketcherError> {
        if sample.is_empty() {
            return Err(SketcherError::InvalidInput("the sample has no words".into()));
        }
        self.size_loop(&Sketch::from_formula_hole(), sample, &Clock::new(self.limits.timeout))
    }

    fn size_loop(&self, sketch: &Sketch, sample: &Sample, clock: &Clock) -> Result<SketchResult, SketcherError> {
        let mut result = SketchResult {
            status: Status::ResourceLimit,
            formula: None,
            n_final: None,
            existence: None,
            exists: None,
            iterations: Vec::new(),
            elapsed: Duration::ZERO,
        };
        for n in sketch.size()..=self.limits.max_n {
            let enc = encode_sized(sketch, sample, n)?;
            let cnf = enc.to_cnf();
            let stats = enc.stats(&cnf);
            let Ok(timeout) = clock.remaining() else {
                return Ok(finish(result, Status::Timeout, clock));
            };
            let outcome = self.backend.solve(&cnf, &self.options(timeout))?;
            let answer = match &outcome {
                SolveOutcome::Sat(_) => Answer::Sat,
                SolveOutcome::Unsat => Answer::Unsat,
                SolveOutcome::Timeout => Answer::Timeout,
            };
            result.iterations.push(Iteration { n, answer, stats });
            match outcome {
                SolveOutcome::Sat(model) => {
                    if n > sketch.size() {
                        let previous = &result.iterations[result.iterations.len() - 2];
                        assert!(previous.n == n - 1 && previous.answer == Answer::Unsat, "size loop skipped a bound");
                    }
                    let formula = decode_sized_model(&model, &enc.catalog, sketch, sample)?;
                    verify(&formula, sample)?;
                    result.formula = Some(formula);
                    result.n_final = Some(n);
                    return Ok(finish(result, Status::Completed, clock));
                }
                SolveOutcome::Unsat => {}
                SolveOutcome::Timeout => return Ok(finish(result, Status::Timeout, clock)),
            }
        }
        Ok(finish(result, Status::ResourceLimit, clock))
    }
}

fn finish(mut result: SketchResult, status: Status, clock: &Clock) -> SketchResult {
    result.status = status;
    result.elapsed = clock.start.elapsed();
    result
}

fn verify(formula: &SyntaxDag, sample: &Sample) -> Result<(), SketcherError> {
    let verdict = check_consistency(formula, sample).map_err(|e| SketcherError::Internal(e.to_string()))?;
    if verdict.consistent() {
        Ok(())
    } else {
        Err(SketcherError::Internal("completed formula is not consistent with the sample".into()))
    }
}

impl Sketch {
    /// The sketch `?0`.
    pub fn from_formula_hole() -> Sketch {
        Sketch::new(SyntaxDag::leaf(Label::Hole(HoleKind::Formula, PlaceholderId(0))), Default::default())
            .expect("a single placeholder is a valid sketch")
    }
}

/// `∨_{α∈P} ∧_{β∈N} X^d ℓ`, where `d` is the first position at which `α`
/// and `β` differ and `ℓ` is a literal true on `α[d]` and false on `β[d]`.
/// An empty disjunction is `false` and an empty conjunction `true`.
pub fn generic_consistent_formula(sample: &Sample) -> Result<SyntaxDag, SketcherError> {
    let props = sample.props();
    let mut b = DagBuilder::new();
    let mut disjuncts = Vec::new();
    for (i, alpha) in sample.positives().iter().enumerate() {
        let mut conjuncts = Vec::new();
        for (j, beta) in sample.negatives().iter().enumerate() {
            let bound = comparison_bound(alpha, 0, beta, 0);
            let d = (0..bound)
                .find(|&d| alpha.symbol_at(d) != beta.symbol_at(d))
                .ok_or_else(|| SketcherError::InvalidInput(format!("positive word {i} equals negative word {j}")))?;
            let (a, c) = (alpha.symbol_at(d).bits(), beta.symbol_at(d).bits());
            let mut lit = if a & !c != 0 {
                b.prop(props.name((a & !c).trailing_zeros() as usize))
            } else {
                let p = b.prop(props.name((c & !a).trailing_zeros() as usize));
                b.unary(UnaryOp::Not, p)
            };
            for _ in 0..d {
                lit = b.unary(UnaryOp::Next, lit);
            }
            conjuncts.push(lit);
        }
        let conj = conjuncts
            .into_iter()
            .rev()
            .reduce(|acc, f| b.binary(BinaryOp::And, f, acc))
            .unwrap_or_else(|| b.leaf(Label::True));
        disjuncts.push(conj);
    }
    let root = disjuncts
        .into_iter()
        .rev()
        .reduce(|acc, f| b.binary(BinaryOp::Or, f, acc))
        .unwrap_or_else(|| b.leaf(Label::False));
    Ok(b.build(root))
}
