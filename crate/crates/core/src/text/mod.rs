//! Text formats: formulas, sample files and DIMACS.

pub mod dimacs;
pub mod formula;
pub mod sample;
pub mod span;

pub use dimacs::{read_dimacs, write_dimacs, CnfInput};
pub use formula::{format_dag, format_formula, parse_formula, parse_ltl};
pub use sample::{format_word, parse_word, read_sample, write_sample};
pub use span::{SourceSpan, SyntaxError};
