use ratmath::{lp_solve, LpOutcome, LpProblem, PolyCone, Rational};
use num_traits::Zero;
use serde::Serialize;
use transforms::SmoothBranchProblem;

/// Linearized cone at the anchor: equality gradients as `E`, active inequality gradients as `I`.
pub fn lin_cone_branch(b: &SmoothBranchProblem) -> PolyCone {
    let eq: Vec<Vec<Rational>> = b.eq.iter().map(|c| c.gradient(&b.anchor)).collect();
    let ineq: Vec<Vec<Rational>> = b.active_ineq().iter().map(|&i| b.ineq[i].gradient(&b.anchor)).collect();
    PolyCone::from_rows(b.dim, eq, ineq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TangentStatus {
    Affine,
    BranchLICQ,
    BranchMFCQ,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentCertificate {
    pub status: TangentStatus,
    /// Rank of the stacked active gradients.
    pub rank: usize,
    /// Number of active constraints (equalities plus active inequalities).
    pub active: usize,
    /// Strict-feasibility LP for the MFCQ direction, when one was solved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mfcq_lp: Option<LpOutcome>,
}

/// Returns the linearized cone when a tangent certificate applies, `None` otherwise.
pub fn tangent_cone_branch(b: &SmoothBranchProblem) -> (Option<PolyCone>, TangentCertificate) {
    let lin = lin_cone_branch(b);
    let active_ineq = b.active_ineq();
    let stacked = lin.eq.vstack(&lin.ineq);
    let rank = stacked.rank();
    let active = stacked.rows();
    let affine = b.eq.iter().all(|c| c.is_affine()) && active_ineq.iter().all(|&i| b.ineq[i].is_affine());
    let mut cert = TangentCertificate {
        status: TangentStatus::Unknown,
        rank,
        active,
        mfcq_lp: None,
    };
    if affine {
        cert.status = TangentStatus::Affine;
        return (Some(lin), cert);
    }
    if rank == active {
        cert.status = TangentStatus::BranchLICQ;
        return (Some(lin), cert);
    }
    if lin.eq.rank() == lin.eq.rows() {
        let out = mfcq_lp(&lin);
        let ok = !out.is_infeasible();
        cert.mfcq_lp = Some(out);
        if ok {
            cert.status = TangentStatus::BranchMFCQ;
            return (Some(lin), cert);
        }
    }
    (None, cert)
}

/// `∇h d = 0`, `∇g_A d > 0`.
fn mfcq_lp(lin: &PolyCone) -> LpOutcome {
    let mut p = LpProblem::new(lin.dim);
    for r in lin.eq.row_vecs() {
        p.add_eq(r, Rational::zero());
    }
    for r in lin.ineq.row_vecs() {
        p.add_gt(r, Rational::zero());
    }
    lp_solve(&p).expect("MFCQ LP is well formed")
}

