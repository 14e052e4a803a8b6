//! Propositional encodings of sketch completion.
//!
//! Both encodings describe, for every word `uv^ω` of the sample, a
//! satisfaction table through variables `y[word][node][t]`. Label choices for
//! undetermined nodes are `x` variables, and the sized encoding adds child
//! selectors `l`/`r` for synthesized structure.

mod catalog;
mod existence;
mod sized;

use thiserror::Error;

pub use catalog::{Choice, EncodingStats, Mode, VarCatalog};
pub use existence::{decode_existence_model, encode_existence, ExistenceDecoding, SuffixLabeling};
pub use sized::{decode_sized_model, encode_sized};

use crate::lasso::LassoWord;
use crate::ltl::semantics::{future_window, loop_positions};
use crate::ltl::{BinaryOp, Sample, Sketch, UnaryOp};
use crate::sat::{tseitin, Cnf, PropFormula, PropVar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("the sample has no propositions")]
    EmptyUniverse,
    #[error("the sample has neither positive nor negative words")]
    EmptySample,
    #[error("proposition `{0}` of the sketch is not in the sample's universe")]
    PropositionMismatch(String),
    #[error("size bound {n} is smaller than the sketch ({min} nodes)")]
    SizeTooSmall { n: usize, min: usize },
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

/// A constraint system together with the meaning of its variables.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub formula: PropFormula,
    pub catalog: VarCatalog,
}

impl Encoding {
    pub fn to_cnf(&self) -> Cnf {
        tseitin(&self.formula, self.catalog.num_vars())
    }

    pub fn stats(&self, cnf: &Cnf) -> EncodingStats {
        EncodingStats::new(&self.catalog, cnf)
    }
}

fn validate(sketch: &Sketch, sample: &Sample) -> Result<(), EncodeError> {
    if sample.props().is_empty() {
        return Err(EncodeError::EmptyUniverse);
    }
    if sample.is_empty() {
        return Err(EncodeError::EmptySample);
    }
    for p in sketch.dag().propositions() {
        if sample.props().index_of(p).is_none() {
            return Err(EncodeError::PropositionMismatch(p.to_string()));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Unary(UnaryOp),
    Binary(BinaryOp),
}

/// Value of `op` at position `t` of `w`, expressed over the children's rows.
fn op_semantics(op: Op, w: &LassoWord, t: usize, left: &[PropVar], right: Option<&[PropVar]>) -> PropFormula {
    let l = |k: usize| PropFormula::var(left[k]);
    match op {
        Op::Unary(UnaryOp::Not) => PropFormula::not(l(t)),
        Op::Unary(UnaryOp::Next) => l(w.successor(t)),
        Op::Unary(UnaryOp::Finally) => PropFormula::or(future_window(w, t).map(l)),
        Op::Unary(UnaryOp::Globally) => PropFormula::and(future_window(w, t).map(l)),
        Op::Binary(op) => {
            let right = right.expect("binary operator needs a right child");
            let r = |k: usize| PropFormula::var(right[k]);
            match op {
                BinaryOp::Or => PropFormula::or([l(t), r(t)]),
                BinaryOp::And => PropFormula::and([l(t), r(t)]),
                BinaryOp::Until => PropFormula::or(future_window(w, t).map(|k| {
                    PropFormula::and(std::iter::once(r(k)).chain(loop_positions(w, t, k).into_iter().map(l)))
                })),
            }
        }
    }
}

/// `y ↔ sem` guarded by `guard` (a conjunction of selector variables).
fn guarded_definition(guard: &[PropVar], y: PropVar, sem: PropFormula) -> PropFormula {
    let def = PropFormula::iff(PropFormula::var(y), sem);
    if guard.is_empty() {
        def
    } else {
        PropFormula::implies(PropFormula::and(guard.iter().map(|&g| PropFormula::var(g))), def)
    }
}
