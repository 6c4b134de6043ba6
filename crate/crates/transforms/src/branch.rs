use crate::mpcc::{MpccPoint, MpccProgram};
use crate::TransformError;
use anf_core::{AbsNormalProgram, EvalResult, QuadraticFunc, SignatureVector};
use num_traits::One;
use ratmath::{RatMatrix, Rational};
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;

pub const DEFAULT_BRANCH_CAP: u128 = 1 << 16;

/// Label of a branch problem. Partition indices are 0-based internally and printed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchSpec {
    Signature(SignatureVector),
    Partition(BTreeSet<usize>),
}

impl fmt::Display for BranchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchSpec::Signature(s) => write!(f, "σ={s}"),
            BranchSpec::Partition(p) => {
                let items: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "P={{{}}}", items.join(","))
            }
        }
    }
}

impl Serialize for BranchSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl BranchSpec {
    pub fn parse(s: &str) -> Option<BranchSpec> {
        if let Some(rest) = s.strip_prefix("σ=") {
            return SignatureVector::parse(rest).map(BranchSpec::Signature);
        }
        let inner = s.strip_prefix("P={")?.strip_suffix('}')?;
        if inner.trim().is_empty() {
            return Some(BranchSpec::Partition(BTreeSet::new()));
        }
        inner
            .split(',')
            .map(|x| x.trim().parse::<usize>().ok().filter(|&i| i >= 1).map(|i| i - 1))
            .collect::<Option<BTreeSet<usize>>>()
            .map(BranchSpec::Partition)
    }
}

/// Smooth NLP `min f s.t. eq = 0, ineq ≥ 0` anchored at a feasible point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothBranchProblem {
    pub dim: usize,
    pub f: QuadraticFunc,
    pub eq: Vec<QuadraticFunc>,
    pub ineq: Vec<QuadraticFunc>,
    pub anchor: Vec<Rational>,
    pub spec: BranchSpec,
}

impl SmoothBranchProblem {
    pub fn contains_anchor(&self) -> bool {
        use num_traits::{Signed, Zero};
        self.eq.iter().all(|c| c.eval(&self.anchor).is_zero())
            && self.ineq.iter().all(|c| !c.eval(&self.anchor).is_negative())
    }

    pub fn active_ineq(&self) -> Vec<usize> {
        use num_traits::Zero;
        (0..self.ineq.len())
            .filter(|&i| self.ineq[i].eval(&self.anchor).is_zero())
            .collect()
    }

    pub fn is_feasible(&self, y: &[Rational]) -> bool {
        use num_traits::{Signed, Zero};
        self.eq.iter().all(|c| c.eval(y).is_zero()) && self.ineq.iter().all(|c| !c.eval(y).is_negative())
    }
}

fn check_cap(free: usize, cap: u128) -> Result<(), TransformError> {
    let count = if free >= 127 { u128::MAX } else { 1u128 << free };
    if count > cap {
        return Err(TransformError::BranchCap { count, cap });
    }
    Ok(())
}

/// All definite `σ ⪰ base`, lexicographic with `+` before `-`.
pub fn definite_refinements(base: &SignatureVector) -> Vec<SignatureVector> {
    let free: Vec<usize> = (0..base.len()).filter(|&i| base.0[i] == 0).collect();
    let k = free.len();
    (0..1u64 << k)
        .map(|mask| {
            let mut s = base.clone();
            for (pos, &i) in free.iter().enumerate() {
                s.0[i] = if mask >> (k - 1 - pos) & 1 == 1 { -1 } else { 1 };
            }
            s
        })
        .collect()
}

/// All `P ⊆ d`, in the order matching [`definite_refinements`] under the branch correspondence.
pub fn partition_subsets(d: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let items: Vec<usize> = d.iter().copied().collect();
    let k = items.len();
    (0..1u64 << k)
        .map(|mask| {
            (0..k)
                .filter(|&pos| mask >> (k - 1 - pos) & 1 == 1)
                .map(|pos| items[pos])
                .collect()
        })
        .collect()
}

/// Branch problem NLP(Σ) over `(x, z̃)`.
pub fn anf_branch(p: &AbsNormalProgram, e: &EvalResult, sigma: &SignatureVector) -> SmoothBranchProblem {
    let (n_x, s) = (p.n_t, p.s);
    let n = n_x + s;
    let mut a = RatMatrix::zeros(n, n);
    for j in 0..n_x {
        a[(j, j)] = Rational::one();
    }
    for i in 0..s {
        a[(n_x + i, n_x + i)] = Rational::from_integer(sigma.0[i].into());
    }
    let mut eq: Vec<QuadraticFunc> = p.c_e.iter().map(|c| c.compose(&a, None)).collect();
    for (i, c) in p.c_z.iter().enumerate() {
        eq.push(c.compose(&a, None).sub(&QuadraticFunc::coordinate(n, n_x + i)));
    }
    let mut ineq: Vec<QuadraticFunc> = p.c_i.iter().map(|c| c.compose(&a, None)).collect();
    for i in 0..s {
        ineq.push(QuadraticFunc::coordinate(n, n_x + i).scale(&Rational::from_integer(sigma.0[i].into())));
    }
    let mut sel_f = RatMatrix::zeros(n_x, n);
    for j in 0..n_x {
        sel_f[(j, j)] = Rational::one();
    }
    let mut anchor = e.t.clone();
    anchor.extend(e.z.iter().cloned());
    SmoothBranchProblem {
        dim: n,
        f: p.f.compose(&sel_f, None),
        eq,
        ineq,
        anchor,
        spec: BranchSpec::Signature(sigma.clone()),
    }
}

/// One NLP(Σ) per definite `σ ⪰ σ(x̂)`.
pub fn anf_branches(p: &AbsNormalProgram, e: &EvalResult, cap: u128) -> Result<Vec<SmoothBranchProblem>, TransformError> {
    check_cap(e.alpha.len(), cap)?;
    Ok(definite_refinements(&e.sigma)
        .iter()
        .map(|s| anf_branch(p, e, s))
        .collect())
}

/// Branch problem NLP(P) over `(x, u, v)`.
pub fn mpcc_branch(mp: &MpccProgram, pt: &MpccPoint, part: &BTreeSet<usize>) -> SmoothBranchProblem {
    let n = mp.dim();
    let (up, vp) = (pt.uplus(), pt.vplus());
    let mut eq = mp.eq.clone();
    let mut ineq = mp.ineq.clone();
    for i in 0..mp.s {
        let u = QuadraticFunc::coordinate(n, mp.u_index(i));
        let v = QuadraticFunc::coordinate(n, mp.v_index(i));
        if vp.contains(&i) || part.contains(&i) {
            eq.push(u);
            ineq.push(v);
        } else {
            debug_assert!(up.contains(&i) || pt.degenerate().contains(&i));
            ineq.push(u);
            eq.push(v);
        }
    }
    SmoothBranchProblem {
        dim: n,
        f: mp.f.clone(),
        eq,
        ineq,
        anchor: pt.stacked(),
        spec: BranchSpec::Partition(part.clone()),
    }
}

/// One NLP(P) per `P ⊆ D`.
pub fn mpcc_branches(mp: &MpccProgram, pt: &MpccPoint, cap: u128) -> Result<Vec<SmoothBranchProblem>, TransformError> {
    let d = pt.degenerate();
    check_cap(d.len(), cap)?;
    Ok(partition_subsets(&d).iter().map(|part| mpcc_branch(mp, pt, part)).collect())
}

/// `Σ ↦ P = {i ∈ α : σ_i = −1}` and back; `base` is the signature at the anchor.
pub fn branch_correspondence(spec: &BranchSpec, base: &SignatureVector) -> BranchSpec {
    match spec {
        BranchSpec::Signature(s) => BranchSpec::Partition(
            (0..base.len())
                .filter(|&i| base.0[i] == 0 && s.0[i] == -1)
                .collect(),
        ),
        BranchSpec::Partition(part) => BranchSpec::Signature(SignatureVector(
            (0..base.len())
                .map(|i| match base.0[i] {
                    0 if part.contains(&i) => -1,
                    0 => 1,
                    x => x,
                })
                .collect(),
        )),
    }
}
