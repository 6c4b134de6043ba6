use crate::annotations::{graph_transport, psi_transport, TangentAnnotations};
use crate::CqError;
use anf_core::{constraint_jacobians, eval, AbsNormalProgram, EvalResult, SignatureVector};
use cones::{cone_contains, lin_cone_abs, lin_cone_branch, lin_cone_mpcc, tangent_cone_branch, TangentCertificate, UnionCone};
use ratmath::{PolyCone, Rational};
use serde::Serialize;
use std::fmt;
use transforms::{
    anf_branches, branch_correspondence, lift_point, mpcc_branches, phi_inv, to_mpcc, to_slack, BranchSpec, MpccPoint,
    SmoothBranchProblem, DEFAULT_BRANCH_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Formulation {
    #[serde(rename = "I-NLP")]
    INlp,
    #[serde(rename = "E-NLP")]
    ENlp,
    #[serde(rename = "I-MPCC")]
    IMpcc,
    #[serde(rename = "E-MPCC")]
    EMpcc,
}

impl Formulation {
    pub fn is_mpcc(self) -> bool {
        matches!(self, Formulation::IMpcc | Formulation::EMpcc)
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::INlp => "I-NLP",
            Formulation::ENlp => "E-NLP",
            Formulation::IMpcc => "I-MPCC",
            Formulation::EMpcc => "E-MPCC",
        })
    }
}

/// Where a branch tangent cone comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum TangentSource {
    Certified { certificate: TangentCertificate },
    Annotated,
    /// Carried over from the corresponding branch of another formulation.
    Transported { from: BranchSpec, origin: String },
    Unknown { certificate: TangentCertificate },
}

impl TangentSource {
    pub fn tag(&self) -> String {
        match self {
            TangentSource::Certified { certificate } => format!("{:?}", certificate.status),
            TangentSource::Annotated => "annotation".into(),
            TangentSource::Transported { from, origin } => format!("transported from {from} ({origin})"),
            TangentSource::Unknown { .. } => "unknown".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BranchData {
    pub label: BranchSpec,
    /// Label of the twin branch in the ANF form on the same side (itself for ANF forms).
    pub anf_label: SignatureVector,
    /// Label of the corresponding branch of the original program.
    pub base_label: SignatureVector,
    pub problem: SmoothBranchProblem,
    pub lin: PolyCone,
    /// Union of pieces when known.
    pub tangent: Option<Vec<PolyCone>>,
    pub source: TangentSource,
}

#[derive(Debug, Clone)]
pub struct FormulationData {
    pub formulation: Formulation,
    pub dim: usize,
    /// Anchor point in the formulation's variables.
    pub anchor: Vec<Rational>,
    pub branches: Vec<BranchData>,
    /// Linearized cone assembled from the formulation's own definition.
    pub lin_union: UnionCone,
}

fn own_tangent(b: &SmoothBranchProblem) -> (Option<Vec<PolyCone>>, TangentSource) {
    let (t, certificate) = tangent_cone_branch(b);
    match t {
        Some(c) => (Some(vec![c]), TangentSource::Certified { certificate }),
        None => (None, TangentSource::Unknown { certificate }),
    }
}

fn origin_tag(s: &TangentSource) -> String {
    match s {
        TangentSource::Transported { origin, .. } => origin.clone(),
        other => other.tag(),
    }
}

fn check_inside(label: &BranchSpec, pieces: &[PolyCone], lin: &PolyCone) -> Result<(), CqError> {
    if let Some(k) = pieces.iter().position(|c| !cone_contains(lin, c)) {
        return Err(CqError::Annotation {
            label: label.to_string(),
            reason: format!("piece {} is not contained in the branch linearized cone", k + 1),
        });
    }
    Ok(())
}

fn feasible_eval(p: &AbsNormalProgram, t: &[Rational]) -> Result<EvalResult, CqError> {
    let e = eval(p, t)?;
    if !e.is_feasible() {
        return Err(CqError::Infeasible);
    }
    Ok(e)
}

impl FormulationData {
    /// Dimension of a branch or, for `None`, of the formulation.
    pub fn dim_of(&self, label: &Option<BranchSpec>) -> usize {
        label.as_ref().and_then(|l| self.branch(l)).map_or(self.dim, |b| b.lin.dim)
    }

    pub fn branch(&self, label: &BranchSpec) -> Option<&BranchData> {
        self.branches.iter().find(|b| &b.label == label)
    }

    fn find_anf(&self, sigma: &SignatureVector) -> Option<&BranchData> {
        self.branches.iter().find(|b| &b.anf_label == sigma)
    }

    pub fn inlp(p: &AbsNormalProgram, t: &[Rational], ann: &TangentAnnotations) -> Result<FormulationData, CqError> {
        let e = feasible_eval(p, t)?;
        Self::inlp_at(p, &e, ann)
    }

    pub fn inlp_at(p: &AbsNormalProgram, e: &EvalResult, ann: &TangentAnnotations) -> Result<FormulationData, CqError> {
        let mut branches = Vec::new();
        for b in anf_branches(p, e, DEFAULT_BRANCH_CAP)? {
            let BranchSpec::Signature(sigma) = b.spec.clone() else { unreachable!() };
            let lin = lin_cone_branch(&b);
            let (mut tangent, mut source) = own_tangent(&b);
            if let Some(pieces) = ann.get(&sigma) {
                for c in pieces {
                    if c.dim != lin.dim {
                        return Err(CqError::Annotation {
                            label: b.spec.to_string(),
                            reason: format!("piece has dimension {}, expected {}", c.dim, lin.dim),
                        });
                    }
                }
                check_inside(&b.spec, pieces, &lin)?;
                if tangent.is_none() {
                    tangent = Some(pieces.clone());
                    source = TangentSource::Annotated;
                }
            }
            branches.push(BranchData {
                label: b.spec.clone(),
                anf_label: sigma.clone(),
                base_label: sigma,
                problem: b,
                lin,
                tangent,
                source,
            });
        }
        let mut anchor = e.t.clone();
        anchor.extend(e.z.iter().cloned());
        Ok(FormulationData {
            formulation: Formulation::INlp,
            dim: p.n_t + p.s,
            anchor,
            branches,
            lin_union: lin_cone_abs(p, e)?,
        })
    }

    /// Slack formulation with `w = ±c_I` (`negate` flips inactive components).
    pub fn enlp_at(p: &AbsNormalProgram, e: &EvalResult, negate: &[bool], base: &FormulationData) -> Result<FormulationData, CqError> {
        let sp = to_slack(p);
        let el = feasible_eval(&sp.lifted, &lift_point(e, negate))?;
        let jac = constraint_jacobians(p, e);
        let (s, m2) = (p.s, p.m2());
        let mut branches = Vec::new();
        for b in anf_branches(&sp.lifted, &el, DEFAULT_BRANCH_CAP)? {
            let BranchSpec::Signature(sigma) = b.spec.clone() else { unreachable!() };
            let sigma_t = SignatureVector(sigma.0[..s].to_vec());
            let sigma_w = SignatureVector(sigma.0[s..s + m2].to_vec());
            let lin = lin_cone_branch(&b);
            let (mut tangent, mut source) = own_tangent(&b);
            if tangent.is_none() {
                let twin = base.find_anf(&sigma_t).expect("every slack branch restricts to a base branch");
                if let Some(pieces) = &twin.tangent {
                    let moved: Vec<PolyCone> = pieces
                        .iter()
                        .map(|c| graph_transport(c, p.n_t, s, &jac.d1_i, &jac.d2_i, &sigma_t, &sigma_w))
                        .collect();
                    check_inside(&b.spec, &moved, &lin)?;
                    tangent = Some(moved);
                    source = TangentSource::Transported {
                        from: twin.label.clone(),
                        origin: origin_tag(&twin.source),
                    };
                }
            }
            branches.push(BranchData {
                label: b.spec.clone(),
                anf_label: sigma,
                base_label: sigma_t,
                problem: b,
                lin,
                tangent,
                source,
            });
        }
        let mut anchor = el.t.clone();
        anchor.extend(el.z.iter().cloned());
        Ok(FormulationData {
            formulation: Formulation::ENlp,
            dim: sp.lifted.n_t + sp.lifted.s,
            anchor,
            branches,
            lin_union: lin_cone_abs(&sp.lifted, &el)?,
        })
    }

    /// Counterpart MPCC of `q` at `(x, [z̃]⁺, [z̃]⁻)`; `twin` is the ANF formulation of `q` at the same point.
    fn mpcc_of(q: &AbsNormalProgram, eq: &EvalResult, twin: &FormulationData, kind: Formulation) -> Result<FormulationData, CqError> {
        let mp = to_mpcc(q);
        let pt: MpccPoint = phi_inv(&eq.t, &eq.z);
        let mut branches = Vec::new();
        for b in mpcc_branches(&mp, &pt, DEFAULT_BRANCH_CAP)? {
            let BranchSpec::Partition(part) = b.spec.clone() else { unreachable!() };
            let BranchSpec::Signature(sigma) = branch_correspondence(&b.spec, &eq.sigma) else { unreachable!() };
            let anf = twin.find_anf(&sigma).expect("every partition has an ANF twin");
            let lin = lin_cone_branch(&b);
            let (mut tangent, mut source) = own_tangent(&b);
            if tangent.is_none() {
                if let Some(pieces) = &anf.tangent {
                    let moved: Vec<PolyCone> = pieces.iter().map(|c| psi_transport(c, q.n_t, &pt, &part)).collect();
                    check_inside(&b.spec, &moved, &lin)?;
                    tangent = Some(moved);
                    source = TangentSource::Transported {
                        from: anf.label.clone(),
                        origin: origin_tag(&anf.source),
                    };
                }
            }
            branches.push(BranchData {
                label: b.spec.clone(),
                anf_label: sigma,
                base_label: anf.base_label.clone(),
                problem: b,
                lin,
                tangent,
                source,
            });
        }
        Ok(FormulationData {
            formulation: kind,
            dim: mp.dim(),
            anchor: pt.stacked(),
            branches,
            lin_union: lin_cone_mpcc(q, &pt)?,
        })
    }

    pub fn impcc(p: &AbsNormalProgram, t: &[Rational], ann: &TangentAnnotations) -> Result<FormulationData, CqError> {
        let e = feasible_eval(p, t)?;
        let base = Self::inlp_at(p, &e, ann)?;
        Self::mpcc_of(p, &e, &base, Formulation::IMpcc)
    }

    pub fn empcc_at(p: &AbsNormalProgram, e: &EvalResult, negate: &[bool], slack: &FormulationData) -> Result<FormulationData, CqError> {
        let sp = to_slack(p);
        let el = feasible_eval(&sp.lifted, &lift_point(e, negate))?;
        Self::mpcc_of(&sp.lifted, &el, slack, Formulation::EMpcc)
    }
}

/// All four formulations at one point of the original program.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub eval: EvalResult,
    pub negate: Vec<bool>,
    pub inlp: FormulationData,
    pub enlp: FormulationData,
    pub impcc: FormulationData,
    pub empcc: FormulationData,
}

impl PointAnalysis {
    pub fn new(p: &AbsNormalProgram, t: &[Rational], ann: &TangentAnnotations, negate: &[bool]) -> Result<PointAnalysis, CqError> {
        let e = feasible_eval(p, t)?;
        let inlp = FormulationData::inlp_at(p, &e, ann)?;
        let enlp = FormulationData::enlp_at(p, &e, negate, &inlp)?;
        let impcc = FormulationData::mpcc_of(p, &e, &inlp, Formulation::IMpcc)?;
        let empcc = FormulationData::empcc_at(p, &e, negate, &enlp)?;
        Ok(PointAnalysis {
            eval: e,
            negate: negate.to_vec(),
            inlp,
            enlp,
            impcc,
            empcc,
        })
    }

    pub fn formulations(&self) -> [&FormulationData; 4] {
        [&self.inlp, &self.enlp, &self.impcc, &self.empcc]
    }
}

