use crate::formulation::{BranchData, Formulation, FormulationData};
use cones::{dual_cone, union_covers, union_covers_union, CoverResult, DEFAULT_DEPTH_CAP};
use num_traits::{One, Zero};
use ratmath::rational::serde_rational_vec;
use ratmath::{dd_hrep_to_vrep, dot, lp_solve, neg_vec, primitive, LpProblem, PolyCone, Rational};
use serde::Serialize;
use std::fmt;
use transforms::BranchSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Unknown => "unknown",
        })
    }
}

/// Abadie-type (primal cone equality) or Guignard-type (dual cone equality).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Which {
    Acq,
    Gcq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CqKind {
    #[serde(rename = "AKQ")]
    Akq,
    #[serde(rename = "GKQ")]
    Gkq,
    #[serde(rename = "MPCC-ACQ")]
    MpccAcq,
    #[serde(rename = "MPCC-GCQ")]
    MpccGcq,
    #[serde(rename = "ACQ")]
    BranchAcq,
    #[serde(rename = "GCQ")]
    BranchGcq,
}

impl CqKind {
    pub fn formulation_kind(f: Formulation, which: Which) -> CqKind {
        match (f.is_mpcc(), which) {
            (false, Which::Acq) => CqKind::Akq,
            (false, Which::Gcq) => CqKind::Gkq,
            (true, Which::Acq) => CqKind::MpccAcq,
            (true, Which::Gcq) => CqKind::MpccGcq,
        }
    }

    pub fn branch_kind(which: Which) -> CqKind {
        match which {
            Which::Acq => CqKind::BranchAcq,
            Which::Gcq => CqKind::BranchGcq,
        }
    }
}

impl fmt::Display for CqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CqKind::Akq => "AKQ",
            CqKind::Gkq => "GKQ",
            CqKind::MpccAcq => "MPCC-ACQ",
            CqKind::MpccGcq => "MPCC-GCQ",
            CqKind::BranchAcq => "ACQ",
            CqKind::BranchGcq => "GCQ",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceTag {
    pub branch: BranchSpec,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "evidence", rename_all = "kebab-case")]
pub enum Evidence {
    /// Known tangent pieces cover every piece of the linearized cone.
    TangentCovers { sources: Vec<SourceTag> },
    /// The dual of the known tangent pieces lies in the dual of the linearized cone.
    DualContained { sources: Vec<SourceTag> },
    /// A direction of the linearized cone outside the tangent cone.
    Witness {
        #[serde(with = "serde_rational_vec")]
        direction: Vec<Rational>,
    },
    /// `w` lies in the tangent dual; `direction` lies in the linearized cone with `wᵀd < 0`.
    DualWitness {
        #[serde(with = "serde_rational_vec")]
        w: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        direction: Vec<Rational>,
    },
    /// No decision: the listed branches have no certified or annotated tangent cone.
    Blocked { branches: Vec<BranchSpec>, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqVerdict {
    pub formulation: Formulation,
    pub kind: CqKind,
    /// Branch label for branch-level verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<BranchSpec>,
    pub status: Status,
    pub evidence: Evidence,
}

impl CqVerdict {
    /// `"AKQ[I-NLP]"` or, for branch verdicts, `"ACQ[I-NLP σ=+]"`.
    pub fn name(&self) -> String {
        match &self.label {
            None => format!("{}[{}]", self.kind, self.formulation),
            Some(l) => format!("{}[{} {l}]", self.kind, self.formulation),
        }
    }
}

fn sources<'a>(bs: impl Iterator<Item = &'a BranchData>) -> Vec<SourceTag> {
    bs.map(|b| SourceTag {
        branch: b.label.clone(),
        source: b.source.tag(),
    })
    .collect()
}

fn depth_reason() -> String {
    format!("cover subdivision exceeded depth {DEFAULT_DEPTH_CAP}")
}

/// Some `d ∈ c` with `wᵀd ≤ −1`, primitive.
fn separating_direction(w: &[Rational], c: &PolyCone) -> Option<Vec<Rational>> {
    let mut lp = LpProblem::new(c.dim);
    for r in c.eq.row_vecs() {
        lp.add_eq(r, Rational::zero());
    }
    for r in c.ineq.row_vecs() {
        lp.add_ge(r, Rational::zero());
    }
    lp.add_le(w.to_vec(), -Rational::one());
    let out = lp_solve(&lp).ok()?;
    out.point().map(primitive)
}

/// A generator of `k` outside `target`, paired with a separating direction from one of `members`.
fn dual_witness(k: &PolyCone, target: &PolyCone, members: &[PolyCone]) -> Option<Evidence> {
    let g = dd_hrep_to_vrep(k);
    let mut cands: Vec<Vec<Rational>> = g.rays.iter().filter(|r| !target.contains_point(r)).cloned().collect();
    for l in &g.lineality {
        if !target.contains_point(l) {
            cands.push(l.clone());
        } else if !target.contains_point(&neg_vec(l)) {
            cands.push(neg_vec(l));
        }
    }
    let w = primitive(cands.first()?);
    let direction = members.iter().find_map(|m| separating_direction(&w, m))?;
    debug_assert!(dot(&w, &direction) < Rational::zero());
    Some(Evidence::DualWitness { w, direction })
}

fn intersect_duals(dim: usize, cs: &[PolyCone]) -> PolyCone {
    cs.iter().map(dual_cone).fold(PolyCone::full(dim), |acc, d| acc.intersect(&d))
}

/// Branch-level ACQ (`T = L`) or GCQ (`T* = L*`) of one smooth branch problem.
pub fn check_branch_cq(f: Formulation, b: &BranchData, which: Which) -> CqVerdict {
    let (status, evidence) = match &b.tangent {
        None => (
            Status::Unknown,
            Evidence::Blocked {
                branches: vec![b.label.clone()],
                reason: "no tangent certificate or annotation".into(),
            },
        ),
        Some(t) => match which {
            Which::Acq => match union_covers(t, &b.lin, DEFAULT_DEPTH_CAP) {
                CoverResult::Covered => (Status::Holds, Evidence::TangentCovers { sources: sources([b].into_iter()) }),
                CoverResult::NotCovered(d) => (Status::Fails, Evidence::Witness { direction: d }),
                CoverResult::Unknown => (
                    Status::Unknown,
                    Evidence::Blocked {
                        branches: vec![b.label.clone()],
                        reason: depth_reason(),
                    },
                ),
            },
            Which::Gcq => {
                let t_dual = intersect_duals(b.lin.dim, t);
                let l_dual = dual_cone(&b.lin);
                match dual_witness(&t_dual, &l_dual, std::slice::from_ref(&b.lin)) {
                    None => (Status::Holds, Evidence::DualContained { sources: sources([b].into_iter()) }),
                    Some(w) => (Status::Fails, w),
                }
            }
        },
    };
    CqVerdict {
        formulation: f,
        kind: CqKind::branch_kind(which),
        label: Some(b.label.clone()),
        status,
        evidence,
    }
}

/// Formulation-level ACQ/GCQ from the branch decomposition of the tangent cone.
///
/// With `K` the known tangent pieces and `U` the linearized cones of branches without a known
/// tangent, the tangent cone `T` satisfies `K ⊆ T ⊆ K ∪ U`, so `K*∩U* ⊆ T* ⊆ K*`.
pub fn check_formulation_cq(f: &FormulationData, which: Which) -> CqVerdict {
    let known: Vec<PolyCone> = f.branches.iter().filter_map(|b| b.tangent.clone()).flatten().collect();
    let unknown: Vec<&BranchData> = f.branches.iter().filter(|b| b.tangent.is_none()).collect();
    let lin = f.lin_union.cones();
    let blocked = |reason: String| Evidence::Blocked {
        branches: unknown.iter().map(|b| b.label.clone()).collect(),
        reason,
    };
    let (status, evidence) = match which {
        Which::Acq => match union_covers_union(&known, &lin, DEFAULT_DEPTH_CAP) {
            CoverResult::Covered => (
                Status::Holds,
                Evidence::TangentCovers {
                    sources: sources(f.branches.iter()),
                },
            ),
            first => {
                let outer = if unknown.is_empty() {
                    first
                } else {
                    let mut all = known.clone();
                    all.extend(unknown.iter().map(|b| b.lin.clone()));
                    union_covers_union(&all, &lin, DEFAULT_DEPTH_CAP)
                };
                match outer {
                    CoverResult::NotCovered(d) => (Status::Fails, Evidence::Witness { direction: d }),
                    CoverResult::Unknown => (Status::Unknown, blocked(depth_reason())),
                    CoverResult::Covered => (
                        Status::Unknown,
                        blocked("linearized directions may be tangent to branches without a known tangent cone".into()),
                    ),
                }
            }
        },
        Which::Gcq => {
            let lin_dual = cones::dual_union(&f.lin_union);
            let k_dual = intersect_duals(f.dim, &known);
            if dual_witness(&k_dual, &lin_dual, &lin).is_none() {
                (
                    Status::Holds,
                    Evidence::DualContained {
                        sources: sources(f.branches.iter()),
                    },
                )
            } else {
                let u: Vec<PolyCone> = unknown.iter().map(|b| b.lin.clone()).collect();
                let lower = k_dual.intersect(&intersect_duals(f.dim, &u));
                match dual_witness(&lower, &lin_dual, &lin) {
                    Some(w) => (Status::Fails, w),
                    None => (
                        Status::Unknown,
                        blocked("dual of the known tangent pieces is not contained in the linearized dual".into()),
                    ),
                }
            }
        }
    };
    CqVerdict {
        formulation: f.formulation,
        kind: CqKind::formulation_kind(f.formulation, which),
        label: None,
        status,
        evidence,
    }
}
