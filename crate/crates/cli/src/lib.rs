//! Batch experiment runner and report tables for hoplab.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{parse_seeds, ExperimentConfig, OptimizerKind, ProblemSource, ResolvedProblem, SCHEMA_VERSION};
pub use error::{CliError, CliResult};
pub use report::{summarize_applicability, summarize_hop_stats, summarize_scalability};
pub use run::{load_all, run_experiment, run_once, ConfigRecords, RunRecord};
