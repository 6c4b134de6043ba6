//! Glue between problem points and the engine crates, shared by commands and the corpus run.

use crate::problem::Point;
use anf_core::{AbsNormalProgram, EvalResult};
use cones::{lin_cone_branch, unions_equal, DEFAULT_DEPTH_CAP};
use cq::{recheck_verdict, CqVerdict, Formulation, PointAnalysis};
use ratmath::PolyCone;
use serde::Serialize;
use stationarity::{
    check_b_stationary_anf, check_b_stationary_mpcc, check_m_stationary_anf, check_m_stationary_mpcc, recheck_b,
    recheck_m_anf, recheck_m_mpcc, translate_multipliers, Direction, Form, MultiplierSet, StationarityError,
    StationarityEvidence, StationarityKind, StationarityVerdict,
};
use transforms::{anf_branches, mpcc_branches, phi_inv, to_mpcc, DEFAULT_BRANCH_CAP};

pub fn analyse(p: &AbsNormalProgram, pt: &Point) -> Result<PointAnalysis, cq::CqError> {
    PointAnalysis::new(p, &pt.t, &pt.annotations, &pt.negate)
}

pub fn kind_name(k: StationarityKind) -> &'static str {
    match k {
        StationarityKind::MAnf => "M-ANF",
        StationarityKind::MMpcc => "M-MPCC",
        StationarityKind::BAnf => "B-ANF",
        StationarityKind::BMpcc => "B-MPCC",
    }
}

pub fn stationarity(
    p: &AbsNormalProgram,
    e: &EvalResult,
    m: bool,
    b: bool,
    forms: &[Form],
) -> Result<Vec<StationarityVerdict>, StationarityError> {
    let mp = to_mpcc(p);
    let pt = phi_inv(&e.t, &e.z);
    let mut out = Vec::new();
    if m {
        for f in forms {
            out.push(match f {
                Form::Anf => check_m_stationary_anf(p, e)?,
                Form::Mpcc => check_m_stationary_mpcc(&mp, &pt)?,
            });
        }
    }
    if b {
        for f in forms {
            out.push(match f {
                Form::Anf => check_b_stationary_anf(p, e)?,
                Form::Mpcc => check_b_stationary_mpcc(&mp, &pt)?,
            });
        }
    }
    Ok(out)
}

pub fn recheck_stationarity(p: &AbsNormalProgram, e: &EvalResult, v: &StationarityVerdict) -> Result<(), String> {
    let mp = to_mpcc(p);
    let pt = phi_inv(&e.t, &e.z);
    let r = match v.kind {
        StationarityKind::MAnf => recheck_m_anf(p, e, v),
        StationarityKind::MMpcc => recheck_m_mpcc(&mp, &pt, v),
        StationarityKind::BAnf => recheck_b(&anf_branches(p, e, DEFAULT_BRANCH_CAP).map_err(|x| x.to_string())?, v),
        StationarityKind::BMpcc => recheck_b(&mpcc_branches(&mp, &pt, DEFAULT_BRANCH_CAP).map_err(|x| x.to_string())?, v),
    };
    r.map_err(|m| format!("{}: {m}", kind_name(v.kind)))
}

pub fn recheck_cq(a: &PointAnalysis, v: &CqVerdict) -> Result<(), String> {
    let f = a
        .formulations()
        .into_iter()
        .find(|f| f.formulation == v.formulation)
        .expect("every formulation is analysed");
    recheck_verdict(f, v).map_err(|m| format!("{}: {m}", v.name()))
}

pub fn multipliers(v: &StationarityVerdict) -> Option<&MultiplierSet> {
    match &v.evidence {
        StationarityEvidence::Multipliers { multipliers, .. } => Some(multipliers),
        _ => None,
    }
}

/// Multipliers of one form carried to the other, validated on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Translation {
    pub direction: Direction,
    pub multipliers: MultiplierSet,
}

pub fn translations(p: &AbsNormalProgram, e: &EvalResult, verdicts: &[StationarityVerdict]) -> Result<Vec<Translation>, StationarityError> {
    let mut out = Vec::new();
    for v in verdicts {
        let dir = match v.kind {
            StationarityKind::MAnf => Direction::AnfToMpcc,
            StationarityKind::MMpcc => Direction::MpccToAnf,
            _ => continue,
        };
        if let Some(ms) = multipliers(v) {
            out.push(Translation {
                direction: dir,
                multipliers: translate_multipliers(ms, dir, p, e)?,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub formulation: Formulation,
    pub pieces: usize,
    pub branches: usize,
    /// `None` when the cover test hit its depth cap.
    pub equal: Option<bool>,
}

/// The formulation's linearized cone against the union of its branch linearized cones.
pub fn decomposition(a: &PointAnalysis) -> Vec<Decomposition> {
    a.formulations()
        .into_iter()
        .map(|f| {
            let lins: Vec<PolyCone> = f.branches.iter().map(|b| lin_cone_branch(&b.problem)).collect();
            Decomposition {
                formulation: f.formulation,
                pieces: f.lin_union.members.len(),
                branches: lins.len(),
                equal: unions_equal(&f.lin_union.cones(), &lins, DEFAULT_DEPTH_CAP),
            }
        })
        .collect()
}
