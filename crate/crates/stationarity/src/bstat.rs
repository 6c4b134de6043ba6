use crate::{Form, StationarityError, StationarityEvidence, StationarityKind, StationarityVerdict, Status};
use anf_core::{eval, AbsNormalProgram, EvalResult};
use cones::lin_cone_branch;
use num_traits::{One, Zero};
use ratmath::rational::serde_rational_vec;
use ratmath::{lp_solve, primitive, LpProblem, Rational};
use serde::Serialize;
use transforms::{anf_branches, mpcc_branches, phi_inv, to_mpcc, BranchSpec, MpccPoint, MpccProgram, SmoothBranchProblem, DEFAULT_BRANCH_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum BranchResult {
    /// `∇f = Eᵀy + Iᵀλ` with `λ ≥ 0` over the branch linearized cone `{E d = 0, I d ≥ 0}`.
    Stationary {
        label: BranchSpec,
        #[serde(with = "serde_rational_vec")]
        eq_mult: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        ineq_mult: Vec<Rational>,
    },
    /// `d` in the branch linearized cone with `∇fᵀd < 0`.
    Descent {
        label: BranchSpec,
        #[serde(with = "serde_rational_vec")]
        direction: Vec<Rational>,
    },
}

impl BranchResult {
    pub fn label(&self) -> &BranchSpec {
        match self {
            BranchResult::Stationary { label, .. } | BranchResult::Descent { label, .. } => label,
        }
    }

    pub fn is_stationary(&self) -> bool {
        matches!(self, BranchResult::Stationary { .. })
    }
}

fn check_branch(b: &SmoothBranchProblem) -> BranchResult {
    let lin = lin_cone_branch(b);
    let g = b.f.gradient(&b.anchor);
    let (me, mi) = (lin.eq.rows(), lin.ineq.rows());
    let mut member = LpProblem::new(me + mi);
    for j in 0..lin.dim {
        let mut r: Vec<Rational> = (0..me).map(|k| lin.eq[(k, j)].clone()).collect();
        r.extend((0..mi).map(|k| lin.ineq[(k, j)].clone()));
        member.add_eq(r, g[j].clone());
    }
    for k in 0..mi {
        let mut r = vec![Rational::zero(); me + mi];
        r[me + k] = Rational::one();
        member.add_ge(r, Rational::zero());
    }
    let out = lp_solve(&member).expect("well-formed membership LP");
    if let Some(x) = out.point() {
        return BranchResult::Stationary {
            label: b.spec.clone(),
            eq_mult: x[..me].to_vec(),
            ineq_mult: x[me..].to_vec(),
        };
    }
    let mut descent = LpProblem::new(lin.dim);
    for r in lin.eq.row_vecs() {
        descent.add_eq(r, Rational::zero());
    }
    for r in lin.ineq.row_vecs() {
        descent.add_ge(r, Rational::zero());
    }
    descent.add_le(g, -Rational::one());
    let out = lp_solve(&descent).expect("well-formed descent LP");
    let d = out.point().expect("Farkas alternative to dual membership");
    BranchResult::Descent {
        label: b.spec.clone(),
        direction: primitive(d),
    }
}

fn aggregate(kind: StationarityKind, branches: Vec<BranchResult>) -> StationarityVerdict {
    let status = if branches.iter().all(BranchResult::is_stationary) {
        Status::Holds
    } else {
        Status::Fails
    };
    StationarityVerdict {
        kind,
        status,
        evidence: StationarityEvidence::Branches { branches },
    }
}

/// Abs-normal-linearized B-stationarity: `∇fᵀd ≥ 0` on the linearized cone of every NLP(Σ).
pub fn check_b_stationary_anf(p: &AbsNormalProgram, e: &EvalResult) -> Result<StationarityVerdict, StationarityError> {
    if !e.is_feasible() {
        return Err(StationarityError::Infeasible);
    }
    let bs = anf_branches(p, e, DEFAULT_BRANCH_CAP)?;
    Ok(aggregate(StationarityKind::BAnf, bs.iter().map(check_branch).collect()))
}

/// MPCC-linearized B-stationarity: `∇fᵀd ≥ 0` on the linearized cone of every NLP(P).
pub fn check_b_stationary_mpcc(mp: &MpccProgram, pt: &MpccPoint) -> Result<StationarityVerdict, StationarityError> {
    if !mp.is_feasible(pt) {
        return Err(StationarityError::Infeasible);
    }
    let bs = mpcc_branches(mp, pt, DEFAULT_BRANCH_CAP)?;
    Ok(aggregate(StationarityKind::BMpcc, bs.iter().map(check_branch).collect()))
}

pub fn check_b_stationary(p: &AbsNormalProgram, t: &[Rational], form: Form) -> Result<StationarityVerdict, StationarityError> {
    let e = eval(p, t)?;
    match form {
        Form::Anf => check_b_stationary_anf(p, &e),
        Form::Mpcc => check_b_stationary_mpcc(&to_mpcc(p), &phi_inv(&e.t, &e.z)),
    }
}

/// Re-validates a B-stationarity verdict against freshly built branch problems: multipliers by
/// substitution, descent directions by cone membership and sign.
pub fn recheck_b(branches: &[SmoothBranchProblem], v: &StationarityVerdict) -> Result<(), String> {
    let StationarityEvidence::Branches { branches: results } = &v.evidence else {
        return Err("evidence does not match status".into());
    };
    if results.len() != branches.len() {
        return Err(format!("{} branch results for {} branches", results.len(), branches.len()));
    }
    for (b, r) in branches.iter().zip(results) {
        if r.label() != &b.spec {
            return Err(format!("branch {} reported as {}", b.spec, r.label()));
        }
        let lin = lin_cone_branch(b);
        let g = b.f.gradient(&b.anchor);
        match r {
            BranchResult::Stationary { eq_mult, ineq_mult, .. } => {
                if eq_mult.len() != lin.eq.rows() || ineq_mult.len() != lin.ineq.rows() {
                    return Err(format!("{}: multiplier lengths", b.spec));
                }
                let comb: Vec<Rational> =
                    lin.eq.tr_mul_vec(eq_mult).iter().zip(lin.ineq.tr_mul_vec(ineq_mult)).map(|(a, c)| a + c).collect();
                if comb != g || ineq_mult.iter().any(|l| *l < Rational::zero()) {
                    return Err(format!("{}: gradient is not the claimed cone combination", b.spec));
                }
            }
            BranchResult::Descent { direction, .. } => {
                if !lin.contains_point(direction) || ratmath::dot(&g, direction) >= Rational::zero() {
                    return Err(format!("{}: direction is not a descent direction in the cone", b.spec));
                }
            }
        }
    }
    let all = results.iter().all(BranchResult::is_stationary);
    if all != (v.status == Status::Holds) {
        return Err("status does not match branch results".into());
    }
    Ok(())
}
