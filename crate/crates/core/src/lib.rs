//! Sampling-based verification of alpha-admissible Geraghty-type
//! contractions in metric spaces, Picard iteration with convergence
//! diagnostics, partial-order adapters, and a Green's-function solver for
//! second-order two-point boundary value problems.
//!
//! Verifiers never prove anything: they evaluate inequalities on finite
//! samples and report every violation found as a reproducible witness.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builtins;
pub mod bvp;
mod error;
pub mod framework;
pub mod metric;
pub mod picard;
pub mod poset;

pub use error::{Error, Result};
pub use framework::{
    AlphaFunction, CClassFunction, CheckKind, CheckResult, ContractionBundle, GeraghtyBeta, Mapping,
    Relation, SequenceAxiom, SimulationFunction, Status, VerificationReport, Witness,
};
pub use metric::{GridFunction, MetricSpace, Point};
pub use picard::{picard_iterate, IterationTrace, PicardConfig, Termination};
