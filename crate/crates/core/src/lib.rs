//! Discrete-optimization workbench: the Leading Blocks Problem family and
//! classic binary benchmarks, statistical and empirical linkage learning,
//! LT-GOMEA and ILS optimizers, hop-based analysis of improvement traces, and
//! the WP_LFL network flow-assignment problem.

pub mod benchmarks;
pub mod error;
pub mod hops;
pub mod linkage;
pub mod optimizers;
pub mod problem;
pub mod spec;
pub mod trace;
pub mod wpflf;

pub use error::{Error, Result};
pub use problem::{evaluate, EvaluationBudget, Evaluator, FitnessValue, Genotype, Orientation, Problem};
pub use trace::{ImprovementTrace, TraceEntry};
