//! Benchmark generation from property patterns and comparative runs of the
//! completion algorithms, with CSV/JSON output.

pub mod generate;
pub mod patterns;
pub mod store;
pub mod suite;

use thiserror::Error;

pub use generate::{derive_sketch, generate_sample, Counts, GenParams, Provenance, SketchKind};
pub use patterns::PATTERNS;
pub use store::{load_instances, save_instances};
pub use suite::{
    generate_instances, run_one, run_suite, summarize, write_csv, write_json, Algo, AlgoSummary, BenchRecord, Instance,
    CSV_HEADER,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Precondition(String),
    #[error("gave up after {attempts} draws without enough {class} words")]
    AttemptCap { class: &'static str, attempts: usize },
    #[error("bad instance directory: {0}")]
    Manifest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
