//! Propositional formulas, clausal form and solver backends.

pub mod cnf;
pub mod formula;
pub mod solver;

pub use cnf::{tseitin, Cnf, Lit, Model};
pub use formula::{PropFormula, PropVar, VarAllocator};
pub use solver::{
    solve, Backend, EmbeddedSolver, ExternalSolver, RawOutcome, SatBackend, SolveOptions, SolveOutcome, SolverError,
};
