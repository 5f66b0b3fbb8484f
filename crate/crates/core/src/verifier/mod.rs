//! Feasibility of the section data, glue vectors, effective-divisor descent,
//! and Chern-number bookkeeping.

mod chern;
mod descent;
mod feasibility;
mod glue;
mod yside;

use thiserror::Error;

use crate::exact::ExactError;
use crate::lattice::LatticeError;
use crate::surface::CalcError;

pub use chern::{chern_pipeline, connected_components, ChernNumbers, COVER_DEGREE};
pub use descent::{
    compare_to_reference, derive_certificate_script, derive_script_file, descent_replay, descent_search,
    expected_fiber_degree, reference_divisor, search_descent_within, DescentFailure, DescentRejection, DescentStep,
    DescentTrace, LevelScript, ReferenceDivisor, ReferenceMatch, ScriptFile, CASE_I_LEVEL6_OPENING, CASE_I_REFERENCE,
    MAX_LEVEL, MIN_LEVEL, STEP_CAP,
};
pub use feasibility::{
    candidate_triples, check_config, feasibility_system, feasible_triples, triple_of, witness_round_trip,
    FeasibilityResult, FeasibilityScan, FeasibilitySystem, CANDIDATE_COUNT,
};
pub use glue::{
    branch_divisibility, chain_combination, contracted_lattice, expected_glue, glue_divisor, glue_isotropy,
    glue_search, glue_vector, BranchDivisibility, GlueIsotropy, GlueSearch, GlueVector, CHAIN_WEIGHTS, GLUE_ORDER,
};
pub use yside::{y_side_checks, YSideReport, Y_ORDER7_CURVES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("expected exactly one glue vector, found {}", .0.len())]
    GlueNotUnique(Vec<GlueVector>),
}
