//! Function families of the contraction hypothesis (`beta`, `zeta`, `G`,
//! `alpha`) and the sampling verifiers for their axioms.

mod functions;
mod report;
pub mod sampling;
mod verify;

pub use functions::{
    AlphaFunction, CClassFunction, ContractionBundle, GeraghtyBeta, Mapping, SequenceAxiom,
    SimulationFunction,
};
pub use report::{CheckKind, CheckResult, Relation, Status, VerificationReport, Witness};
pub use verify::{
    check_alpha_admissible, check_cclass, check_cg_simulation, check_geraghty_beta,
    check_triangular_alpha, check_zeta_pointwise, check_zeta_sequences, contraction_lhs, eval_m,
    tail_len, verify_contraction, SequenceProbe, BETA_LIMIT_FLOOR, BETA_LIMIT_TOL, MIN_TAIL,
};
