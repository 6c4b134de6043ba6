//! Exact polyhedral cones attached to abs-normal and MPCC formulations.

pub mod branch;
pub mod cover;
pub mod dual;
pub mod formulation;

pub use branch::{lin_cone_branch, tangent_cone_branch, TangentCertificate, TangentStatus};
pub use cover::{cone_contains, cone_equal, union_covers, union_covers_union, unions_equal, CoverResult, DEFAULT_DEPTH_CAP};
pub use dual::{dual_cone, dual_union};
pub use formulation::{compl_cone, lin_cone_abs, lin_cone_mpcc, LabeledCone, UnionCone};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error(transparent)]
    Transform(#[from] transforms::TransformError),
    #[error(transparent)]
    Anf(#[from] anf_core::AnfError),
    #[error("point is not feasible: {0}")]
    Infeasible(String),
}
