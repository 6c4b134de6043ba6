//! M- and B-stationarity of abs-normal NLPs and their counterpart MPCCs.

pub mod bstat;
pub mod mstat;
pub mod multipliers;

pub use bstat::{check_b_stationary, check_b_stationary_anf, check_b_stationary_mpcc, recheck_b, BranchResult};
pub use mstat::{
    check_m_stationary, check_m_stationary_anf, check_m_stationary_mpcc, recheck_m_anf, recheck_m_mpcc, Case, CaseChoice,
    CaseRefutation, DEFAULT_CASE_CAP,
};
pub use multipliers::{translate_multipliers, validate_m_anf, validate_m_mpcc, Direction, MultiplierSet};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StationarityError {
    #[error(transparent)]
    Anf(#[from] anf_core::AnfError),
    #[error(transparent)]
    Transform(#[from] transforms::TransformError),
    #[error("point is infeasible")]
    Infeasible,
    #[error("{count} sign cases exceed the cap of {cap}")]
    CaseCap { count: u128, cap: u128 },
    #[error("invalid multipliers: {0}")]
    InvalidMultipliers(String),
}

/// Which formulation a check runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Anf,
    Mpcc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StationarityKind {
    #[serde(rename = "M-ANF")]
    MAnf,
    #[serde(rename = "M-MPCC")]
    MMpcc,
    #[serde(rename = "B-ANF")]
    BAnf,
    #[serde(rename = "B-MPCC")]
    BMpcc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "evidence", rename_all = "kebab-case")]
pub enum StationarityEvidence {
    /// Multipliers satisfying the system, with the sign case used at each kink index.
    Multipliers { multipliers: MultiplierSet, cases: Vec<CaseChoice> },
    /// One infeasibility certificate per case combination.
    NoMultipliers { refutations: Vec<CaseRefutation> },
    /// Per-branch dual-membership certificates or descent directions.
    Branches { branches: Vec<BranchResult> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StationarityVerdict {
    pub kind: StationarityKind,
    pub status: Status,
    pub evidence: StationarityEvidence,
}

impl StationarityVerdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}
