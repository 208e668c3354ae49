//! Dataset ingestion, split protocols and the evaluation pipeline around
//! `chaostex-core`.

pub mod dataset;
pub mod error;
pub mod experiment;
pub mod features;
pub mod splits;
pub mod synth;
pub mod table;

pub use dataset::{ingest, load_gray, DatasetIndex, IngestOptions, Sample};
pub use error::{HarnessError, Result};
pub use experiment::{evaluate, evaluate_splits, run_experiment, EvalSettings, ExperimentResult, RoundResult};
pub use features::{extract_dataset, ExtractOptions};
pub use splits::{make_splits, Protocol, Split};
pub use table::{FeatureKind, FeatureTable, TableMeta};
