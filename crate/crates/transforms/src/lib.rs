//! Derived formulations of an abs-normal program: slack reformulation, counterpart
//! MPCCs, smooth branch problems and the maps between them.

pub mod branch;
pub mod maps;
pub mod mpcc;
pub mod slack;

pub use branch::{
    anf_branch, anf_branches, branch_correspondence, mpcc_branch, definite_refinements, mpcc_branches, partition_subsets, BranchSpec,
    SmoothBranchProblem, DEFAULT_BRANCH_CAP,
};
pub use maps::{phi, phi_inv, psi, psi_inv};
pub use mpcc::{to_mpcc, MpccPoint, MpccProgram};
pub use slack::{lift_point, to_slack, SlackProgram};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("{count} branches exceed the cap of {cap}")]
    BranchCap { count: u128, cap: u128 },
    #[error("infeasible input: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Anf(#[from] anf_core::AnfError),
}
