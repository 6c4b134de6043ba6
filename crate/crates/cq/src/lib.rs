//! Abadie/Guignard-type kink and MPCC constraint qualifications with certificates.

pub mod annotations;
pub mod decide;
pub mod formulation;
pub mod recheck;
pub mod relations;

pub use annotations::{graph_transport, psi_transport, TangentAnnotations};
pub use decide::{check_branch_cq, check_formulation_cq, CqKind, CqVerdict, Evidence, Status, Which};
pub use formulation::{BranchData, Formulation, FormulationData, PointAnalysis, TangentSource};
pub use recheck::recheck_verdict;
pub use relations::{verify_relations, Arrow, ArrowKind, RelationReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CqError {
    #[error(transparent)]
    Cone(#[from] cones::ConeError),
    #[error(transparent)]
    Transform(#[from] transforms::TransformError),
    #[error(transparent)]
    Anf(#[from] anf_core::AnfError),
    #[error("point is infeasible")]
    Infeasible,
    #[error("invalid tangent annotation for {label}: {reason}")]
    Annotation { label: String, reason: String },
}

/// AKQ at `t` of the program itself.
pub fn check_akq(p: &anf_core::AbsNormalProgram, t: &[ratmath::Rational], ann: &TangentAnnotations) -> Result<CqVerdict, CqError> {
    let f = FormulationData::inlp(p, t, ann)?;
    Ok(check_formulation_cq(&f, Which::Acq))
}

/// GKQ at `t` of the program itself.
pub fn check_gkq(p: &anf_core::AbsNormalProgram, t: &[ratmath::Rational], ann: &TangentAnnotations) -> Result<CqVerdict, CqError> {
    let f = FormulationData::inlp(p, t, ann)?;
    Ok(check_formulation_cq(&f, Which::Gcq))
}

/// MPCC-ACQ or MPCC-GCQ of the counterpart MPCC at `(t, [z̃]⁺, [z̃]⁻)`.
pub fn check_mpcc_cq(
    p: &anf_core::AbsNormalProgram,
    t: &[ratmath::Rational],
    ann: &TangentAnnotations,
    which: Which,
) -> Result<CqVerdict, CqError> {
    let f = FormulationData::impcc(p, t, ann)?;
    Ok(check_formulation_cq(&f, which))
}
