//! LTL formulas and sketches as syntax DAGs, and their semantics on lasso words.

pub mod dag;
pub mod sample;
pub mod semantics;
pub mod sketch;

pub use dag::{BinaryOp, DagBuilder, HoleKind, Label, Node, PlaceholderId, SyntaxDag, UnaryOp};
pub use sample::{Polarity, Propositions, Sample, SampleError};
pub use semantics::{build_table, check_consistency, evaluate, EvalError, SatisfactionTable, Verdict};
pub use sketch::{apply_substitution, Image, PlaceholderInfo, Sketch, SketchError, Substitution};
