//! Batch driver: loads a run configuration, executes verification suites,
//! Picard runs or BVP solves, and writes reports and CSV artifacts.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod run;

pub use config::RunConfig;
pub use error::{exit, CliError};
pub use run::{run, RunOutcome};
