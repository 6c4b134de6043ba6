//! Cones of whole formulations, assembled directly from the partial Jacobians.

use crate::ConeError;
use anf_core::{constraint_jacobians, eval, AbsNormalProgram, EvalResult};
use num_traits::{One, Zero};
use ratmath::{PolyCone, Rational};
use serde::Serialize;
use transforms::{definite_refinements, partition_subsets, BranchSpec, MpccPoint, TransformError, DEFAULT_BRANCH_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledCone {
    pub label: BranchSpec,
    #[serde(serialize_with = "ser_cone")]
    pub cone: PolyCone,
}

fn ser_cone<S: serde::Serializer>(c: &PolyCone, s: S) -> Result<S::Ok, S::Error> {
    c.rows().serialize(s)
}

/// Finite union of labeled polyhedral cones in a common dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionCone {
    pub dim: usize,
    pub members: Vec<LabeledCone>,
}

impl UnionCone {
    pub fn cones(&self) -> Vec<PolyCone> {
        self.members.iter().map(|m| m.cone.clone()).collect()
    }

    pub fn contains_point(&self, d: &[Rational]) -> bool {
        self.members.iter().any(|m| m.cone.contains_point(d))
    }
}

fn unit(n: usize, j: usize, k: Rational) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); n];
    e[j] = k;
    e
}

fn check_cap(free: usize) -> Result<(), ConeError> {
    let count = 1u128 << free.min(127);
    if count > DEFAULT_BRANCH_CAP {
        return Err(TransformError::BranchCap {
            count,
            cap: DEFAULT_BRANCH_CAP,
        }
        .into());
    }
    Ok(())
}

/// Abs-normal-linearized cone over `(δt, δz̃)`, split into the orthants of `δz̃_α`.
/// On the piece with sign pattern `σ` the substitution `δζ = Σ δz̃` is exact.
pub fn lin_cone_abs(p: &AbsNormalProgram, e: &EvalResult) -> Result<UnionCone, ConeError> {
    if !e.is_feasible() {
        return Err(ConeError::Infeasible(format!("t = {}", ratmath::format_vec(&e.t))));
    }
    check_cap(e.alpha.len())?;
    let (n_t, s) = (p.n_t, p.s);
    let n = n_t + s;
    let jac = constraint_jacobians(p, e);
    let mut members = Vec::new();
    for sigma in definite_refinements(&e.sigma) {
        let sg = |i: usize| Rational::from_integer(sigma.0[i].into());
        let row = |d1: &[Rational], d2: &[Rational]| -> Vec<Rational> {
            let mut r = d1.to_vec();
            r.extend((0..s).map(|i| &d2[i] * sg(i)));
            r
        };
        let mut eq = Vec::new();
        let mut ineq = Vec::new();
        for k in 0..p.m1() {
            eq.push(row(jac.d1_e.row(k), jac.d2_e.row(k)));
        }
        for i in 0..s {
            let mut r = row(jac.d1_z.row(i), jac.d2_z.row(i));
            r[n_t + i] -= Rational::one();
            eq.push(r);
        }
        for &k in &e.active_i {
            ineq.push(row(jac.d1_i.row(k), jac.d2_i.row(k)));
        }
        for &i in &e.alpha {
            ineq.push(unit(n, n_t + i, sg(i)));
        }
        members.push(LabeledCone {
            label: BranchSpec::Signature(sigma.clone()),
            cone: PolyCone::from_rows(n, eq, ineq),
        });
    }
    Ok(UnionCone { dim: n, members })
}

fn anchor_eval(p: &AbsNormalProgram, pt: &MpccPoint) -> Result<EvalResult, ConeError> {
    let e = eval(p, &pt.x)?;
    let z: Vec<Rational> = pt.u.iter().zip(&pt.v).map(|(a, b)| a - b).collect();
    if !pt.is_complementary() || z != e.z || !e.is_feasible() {
        return Err(ConeError::Infeasible("(x, u, v) is not feasible for the counterpart MPCC".into()));
    }
    Ok(e)
}

/// Sign-fixing pieces of the complementarity cone over `(δu, δv)`, one per `P ⊆ D`.
fn compl_rows(pt: &MpccPoint, part: &std::collections::BTreeSet<usize>, offset: usize, n: usize) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let s = pt.u.len();
    let one = Rational::one();
    let (up, vp, d) = (pt.uplus(), pt.vplus(), pt.degenerate());
    let mut eq = Vec::new();
    let mut ineq = Vec::new();
    for i in 0..s {
        let (du, dv) = (offset + i, offset + s + i);
        if vp.contains(&i) {
            eq.push(unit(n, du, one.clone()));
        } else if up.contains(&i) {
            eq.push(unit(n, dv, one.clone()));
        } else if d.contains(&i) && part.contains(&i) {
            eq.push(unit(n, du, one.clone()));
            ineq.push(unit(n, dv, one.clone()));
        } else {
            eq.push(unit(n, dv, one.clone()));
            ineq.push(unit(n, du, one.clone()));
        }
    }
    (eq, ineq)
}

pub fn compl_cone(pt: &MpccPoint) -> Result<UnionCone, ConeError> {
    if !pt.is_complementary() {
        return Err(ConeError::Infeasible("u, v are not complementary".into()));
    }
    let d = pt.degenerate();
    check_cap(d.len())?;
    let n = 2 * pt.u.len();
    let members = partition_subsets(&d)
        .into_iter()
        .map(|part| {
            let (eq, ineq) = compl_rows(pt, &part, 0, n);
            LabeledCone {
                label: BranchSpec::Partition(part),
                cone: PolyCone::from_rows(n, eq, ineq),
            }
        })
        .collect();
    Ok(UnionCone { dim: n, members })
}

/// MPCC-linearized cone over `(δx, δu, δv)` for the counterpart of `p` at `pt`.
pub fn lin_cone_mpcc(p: &AbsNormalProgram, pt: &MpccPoint) -> Result<UnionCone, ConeError> {
    let e = anchor_eval(p, pt)?;
    let d = pt.degenerate();
    check_cap(d.len())?;
    let (n_x, s) = (p.n_t, p.s);
    let n = n_x + 2 * s;
    let jac = constraint_jacobians(p, &e);
    let row = |d1: &[Rational], d2: &[Rational]| -> Vec<Rational> {
        let mut r = d1.to_vec();
        r.extend(d2.iter().cloned());
        r.extend(d2.iter().cloned());
        r
    };
    let mut eq = Vec::new();
    let mut ineq = Vec::new();
    for k in 0..p.m1() {
        eq.push(row(jac.d1_e.row(k), jac.d2_e.row(k)));
    }
    for i in 0..s {
        let mut r = row(jac.d1_z.row(i), jac.d2_z.row(i));
        r[n_x + i] -= Rational::one();
        r[n_x + s + i] += Rational::one();
        eq.push(r);
    }
    for &k in &e.active_i {
        ineq.push(row(jac.d1_i.row(k), jac.d2_i.row(k)));
    }
    let members = partition_subsets(&d)
        .into_iter()
        .map(|part| {
            let (ce, ci) = compl_rows(pt, &part, n_x, n);
            let mut eq = eq.clone();
            let mut ineq = ineq.clone();
            eq.extend(ce);
            ineq.extend(ci);
            LabeledCone {
                label: BranchSpec::Partition(part),
                cone: PolyCone::from_rows(n, eq, ineq),
            }
        })
        .collect();
    Ok(UnionCone { dim: n, members })
}
