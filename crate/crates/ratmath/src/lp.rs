//! Exact linear programming with re-checkable certificates.
//!
//! Problems are stated over free variables `x ∈ Rⁿ` with equality rows `A x = b`,
//! inequality rows `G x ≥ h` and an optional set of inequality rows that must hold
//! strictly. Internally the solver works on the standard form
//! `min Cᵀ X, M X = r, X ≥ 0` with `X = (x⁺, x⁻, s)` and uses a dense tableau with
//! Bland's rule, so it terminates without perturbation.

use crate::matrix::RatMatrix;
use crate::rational::{dot, format_rational, serde_rational, serde_rational_vec, Rational};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub n: usize,
    pub objective: Option<(Sense, Vec<Rational>)>,
    pub eq: RatMatrix,
    pub eq_rhs: Vec<Rational>,
    pub ineq: RatMatrix,
    pub ineq_rhs: Vec<Rational>,
    /// Indices into the inequality rows that must hold strictly.
    pub strict: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("strict inequalities are only supported in feasibility problems")]
    StrictWithObjective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    FeasiblePoint,
    FarkasInfeasibilityRay,
    OptimalPrimalDualPair,
    UnboundedRay,
}

/// Proof object for an LP verdict.
///
/// Multipliers follow the minimisation convention: for `Maximize` the
/// objective is negated first, so an optimal pair always satisfies
/// `Aᵀy + Gᵀλ = s·c`, `λ ≥ 0` and `s·cᵀx = bᵀy + hᵀλ` with `s = ±1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LpCertificate {
    FeasiblePoint {
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
    },
    /// `Aᵀy + Gᵀλ = 0`, `λ ≥ 0`, `bᵀy + hᵀλ ≥ 0`, and either the inequality is
    /// strict or `λ` is positive on some strict row.
    FarkasInfeasibilityRay {
        #[serde(with = "serde_rational_vec")]
        y_eq: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        y_ineq: Vec<Rational>,
    },
    OptimalPrimalDualPair {
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        y_eq: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        y_ineq: Vec<Rational>,
    },
    /// `x` feasible, `A d = 0`, `G d ≥ 0` and `d` improves the objective.
    UnboundedRay {
        #[serde(with = "serde_rational_vec")]
        x: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        d: Vec<Rational>,
    },
}

impl LpCertificate {
    pub fn kind(&self) -> CertificateKind {
        match self {
            LpCertificate::FeasiblePoint { .. } => CertificateKind::FeasiblePoint,
            LpCertificate::FarkasInfeasibilityRay { .. } => CertificateKind::FarkasInfeasibilityRay,
            LpCertificate::OptimalPrimalDualPair { .. } => CertificateKind::OptimalPrimalDualPair,
            LpCertificate::UnboundedRay { .. } => CertificateKind::UnboundedRay,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum LpOutcome {
    Feasible {
        certificate: LpCertificate,
    },
    Infeasible {
        certificate: LpCertificate,
    },
    Optimal {
        #[serde(with = "serde_rational")]
        value: Rational,
        certificate: LpCertificate,
    },
    Unbounded {
        certificate: LpCertificate,
    },
}

impl LpOutcome {
    pub fn certificate(&self) -> &LpCertificate {
        match self {
            LpOutcome::Feasible { certificate }
            | LpOutcome::Infeasible { certificate }
            | LpOutcome::Optimal { certificate, .. }
            | LpOutcome::Unbounded { certificate } => certificate,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }

    /// A primal point, when the verdict carries one.
    pub fn point(&self) -> Option<&[Rational]> {
        match self.certificate() {
            LpCertificate::FeasiblePoint { x }
            | LpCertificate::OptimalPrimalDualPair { x, .. }
            | LpCertificate::UnboundedRay { x, .. } => Some(x),
            LpCertificate::FarkasInfeasibilityRay { .. } => None,
        }
    }
}

impl LpProblem {
    pub fn new(n: usize) -> Self {
        LpProblem {
            n,
            objective: None,
            eq: RatMatrix::zeros(0, n),
            eq_rhs: Vec::new(),
            ineq: RatMatrix::zeros(0, n),
            ineq_rhs: Vec::new(),
            strict: BTreeSet::new(),
        }
    }

    pub fn minimize(mut self, c: Vec<Rational>) -> Self {
        self.objective = Some((Sense::Minimize, c));
        self
    }

    pub fn maximize(mut self, c: Vec<Rational>) -> Self {
        self.objective = Some((Sense::Maximize, c));
        self
    }

    pub fn add_eq(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.eq.push_row(row);
        self.eq_rhs.push(rhs);
    }

    pub fn add_ge(&mut self, row: Vec<Rational>, rhs: Rational) -> usize {
        self.ineq.push_row(row);
        self.ineq_rhs.push(rhs);
        self.ineq_rhs.len() - 1
    }

    pub fn add_le(&mut self, row: Vec<Rational>, rhs: Rational) -> usize {
        self.add_ge(row.into_iter().map(|x| -x).collect(), -rhs)
    }

    /// Adds the strict row `row · x > rhs`.
    pub fn add_gt(&mut self, row: Vec<Rational>, rhs: Rational) -> usize {
        let i = self.add_ge(row, rhs);
        self.strict.insert(i);
        i
    }

    fn check_dims(&self) -> Result<(), LpError> {
        let bad = |m: String| Err(LpError::Dimension(m));
        if self.eq.cols() != self.n || self.ineq.cols() != self.n {
            return bad(format!("constraint width differs from n = {}", self.n));
        }
        if self.eq.rows() != self.eq_rhs.len() || self.ineq.rows() != self.ineq_rhs.len() {
            return bad("right-hand side length differs from row count".into());
        }
        if let Some((_, c)) = &self.objective {
            if c.len() != self.n {
                return bad(format!("objective has length {}, expected {}", c.len(), self.n));
            }
        }
        if let Some(&i) = self.strict.iter().find(|&&i| i >= self.ineq.rows()) {
            return bad(format!("strict index {i} is not an inequality row"));
        }
        Ok(())
    }

    fn is_feasibility(&self) -> bool {
        match &self.objective {
            None => true,
            Some((_, c)) => c.iter().all(Zero::is_zero),
        }
    }

    /// True when `x` satisfies every row, strict rows strictly.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.n
            && self.eq.mul_vec(x) == self.eq_rhs
            && self
                .ineq
                .mul_vec(x)
                .iter()
                .zip(&self.ineq_rhs)
                .enumerate()
                .all(|(i, (v, h))| if self.strict.contains(&i) { v > h } else { v >= h })
    }
}

/// Solves `p` exactly and returns a verdict with its certificate.
pub fn lp_solve(p: &LpProblem) -> Result<LpOutcome, LpError> {
    p.check_dims()?;
    let out = if !p.strict.is_empty() {
        if !p.is_feasibility() {
            return Err(LpError::StrictWithObjective);
        }
        solve_strict(p)
    } else if p.is_feasibility() {
        match solve_standard(p, None) {
            StdOutcome::Infeasible { y_eq, y_ineq } => LpOutcome::Infeasible {
                certificate: LpCertificate::FarkasInfeasibilityRay { y_eq, y_ineq },
            },
            StdOutcome::Optimal { x, .. } => LpOutcome::Feasible {
                certificate: LpCertificate::FeasiblePoint { x },
            },
            StdOutcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
        }
    } else {
        let (sense, c) = p.objective.clone().expect("objective present");
        let s = if sense == Sense::Maximize { -Rational::one() } else { Rational::one() };
        let sc: Vec<Rational> = c.iter().map(|x| x * &s).collect();
        match solve_standard(p, Some(&sc)) {
            StdOutcome::Infeasible { y_eq, y_ineq } => LpOutcome::Infeasible {
                certificate: LpCertificate::FarkasInfeasibilityRay { y_eq, y_ineq },
            },
            StdOutcome::Optimal { x, y_eq, y_ineq } => LpOutcome::Optimal {
                value: dot(&c, &x),
                certificate: LpCertificate::OptimalPrimalDualPair { x, y_eq, y_ineq },
            },
            StdOutcome::Unbounded { x, d } => LpOutcome::Unbounded {
                certificate: LpCertificate::UnboundedRay { x, d },
            },
        }
    };
    debug_assert!(validate(p, &out).is_ok(), "certificate failed to validate: {:?}", validate(p, &out));
    Ok(out)
}

/// Strict feasibility by maximising a margin `m ≤ 1` added to every strict row.
fn solve_strict(p: &LpProblem) -> LpOutcome {
    let n = p.n;
    let mut q = LpProblem::new(n + 1);
    for i in 0..p.eq.rows() {
        let mut row = p.eq.row(i).to_vec();
        row.push(Rational::zero());
        q.add_eq(row, p.eq_rhs[i].clone());
    }
    for i in 0..p.ineq.rows() {
        let mut row = p.ineq.row(i).to_vec();
        row.push(if p.strict.contains(&i) { -Rational::one() } else { Rational::zero() });
        q.add_ge(row, p.ineq_rhs[i].clone());
    }
    let mut cap = vec![Rational::zero(); n];
    cap.push(-Rational::one());
    q.add_ge(cap, -Rational::one());
    let mut c = vec![Rational::zero(); n];
    c.push(-Rational::one());
    let k = p.ineq.rows();
    match solve_standard(&q, Some(&c)) {
        StdOutcome::Infeasible { y_eq, mut y_ineq } => {
            y_ineq.truncate(k);
            LpOutcome::Infeasible {
                certificate: LpCertificate::FarkasInfeasibilityRay { y_eq, y_ineq },
            }
        }
        StdOutcome::Optimal { mut x, y_eq, mut y_ineq } => {
            let margin = x.pop().expect("margin variable");
            if margin.is_positive() {
                LpOutcome::Feasible {
                    certificate: LpCertificate::FeasiblePoint { x },
                }
            } else {
                y_ineq.truncate(k);
                LpOutcome::Infeasible {
                    certificate: LpCertificate::FarkasInfeasibilityRay { y_eq, y_ineq },
                }
            }
        }
        StdOutcome::Unbounded { .. } => unreachable!("margin is capped"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("certificate rejected: {0}")]
pub struct CertificateError(pub String);

/// Re-checks `out` against `p` by direct substitution.
pub fn validate(p: &LpProblem, out: &LpOutcome) -> Result<(), CertificateError> {
    let fail = |m: &str| Err(CertificateError(m.to_string()));
    let cert = out.certificate();
    let kind_ok = matches!(
        (out, cert.kind()),
        (LpOutcome::Feasible { .. }, CertificateKind::FeasiblePoint)
            | (LpOutcome::Infeasible { .. }, CertificateKind::FarkasInfeasibilityRay)
            | (LpOutcome::Optimal { .. }, CertificateKind::OptimalPrimalDualPair)
            | (LpOutcome::Unbounded { .. }, CertificateKind::UnboundedRay)
    );
    if !kind_ok {
        return fail("certificate kind does not match verdict");
    }
    match cert {
        LpCertificate::FeasiblePoint { x } => {
            if !p.is_feasible_point(x) {
                return fail("point violates a constraint");
            }
        }
        LpCertificate::FarkasInfeasibilityRay { y_eq, y_ineq } => {
            if y_eq.len() != p.eq.rows() || y_ineq.len() != p.ineq.rows() {
                return fail("multiplier length mismatch");
            }
            if y_ineq.iter().any(Signed::is_negative) {
                return fail("negative inequality multiplier");
            }
            let comb = add(&p.eq.tr_mul_vec(y_eq), &p.ineq.tr_mul_vec(y_ineq));
            if comb.iter().any(|v| !v.is_zero()) {
                return fail("multipliers do not annihilate the constraint matrix");
            }
            let rhs = dot(&p.eq_rhs, y_eq) + dot(&p.ineq_rhs, y_ineq);
            let strict_hit = p.strict.iter().any(|&i| y_ineq[i].is_positive());
            if rhs.is_negative() || (rhs.is_zero() && !strict_hit) {
                return fail(&format!("ray does not separate (bᵀy + hᵀλ = {})", format_rational(&rhs)));
            }
        }
        LpCertificate::OptimalPrimalDualPair { x, y_eq, y_ineq } => {
            let LpOutcome::Optimal { value, .. } = out else { unreachable!() };
            let Some((sense, c)) = &p.objective else {
                return fail("optimal verdict without objective");
            };
            if !p.is_feasible_point(x) {
                return fail("optimal point infeasible");
            }
            if y_eq.len() != p.eq.rows() || y_ineq.len() != p.ineq.rows() {
                return fail("multiplier length mismatch");
            }
            if y_ineq.iter().any(Signed::is_negative) {
                return fail("negative inequality multiplier");
            }
            let s = if *sense == Sense::Maximize { -Rational::one() } else { Rational::one() };
            let sc: Vec<Rational> = c.iter().map(|v| v * &s).collect();
            if add(&p.eq.tr_mul_vec(y_eq), &p.ineq.tr_mul_vec(y_ineq)) != sc {
                return fail("dual infeasible");
            }
            if dot(&sc, x) != dot(&p.eq_rhs, y_eq) + dot(&p.ineq_rhs, y_ineq) {
                return fail("duality gap");
            }
            if &dot(c, x) != value {
                return fail("reported value differs from cᵀx");
            }
        }
        LpCertificate::UnboundedRay { x, d } => {
            let Some((sense, c)) = &p.objective else {
                return fail("unbounded verdict without objective");
            };
            if !p.is_feasible_point(x) {
                return fail("base point infeasible");
            }
            if d.len() != p.n || p.eq.mul_vec(d).iter().any(|v| !v.is_zero()) {
                return fail("ray leaves the equality set");
            }
            if p.ineq.mul_vec(d).iter().any(Signed::is_negative) {
                return fail("ray violates an inequality");
            }
            let cd = dot(c, d);
            let improving = match sense {
                Sense::Minimize => cd.is_negative(),
                Sense::Maximize => cd.is_positive(),
            };
            if !improving {
                return fail("ray does not improve the objective");
            }
        }
    }
    Ok(())
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

enum StdOutcome {
    Infeasible { y_eq: Vec<Rational>, y_ineq: Vec<Rational> },
    Optimal { x: Vec<Rational>, y_eq: Vec<Rational>, y_ineq: Vec<Rational> },
    Unbounded { x: Vec<Rational>, d: Vec<Rational> },
}

/// Dense simplex tableau over `[M | I_art]` with an objective row.
struct Tableau {
    m: usize,
    /// Structural columns; artificials occupy `ncols..ncols + m`.
    ncols: usize,
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    z: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn total(&self) -> usize {
        self.ncols + self.m
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for v in self.t[r].iter_mut() {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = self.t[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r || self.t[i][c].is_zero() {
                continue;
            }
            let f = self.t[i][c].clone();
            for (v, pv) in self.t[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.z[c].is_zero() {
            let f = self.z[c].clone();
            for (v, pv) in self.z.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Sets the objective row to reduced costs of `cost`.
    fn price(&mut self, cost: &[Rational]) {
        let mut z = cost.to_vec();
        for i in 0..self.m {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (zj, tij) in z.iter_mut().zip(&self.t[i]) {
                if !tij.is_zero() {
                    *zj -= cb * tij;
                }
            }
        }
        self.z = z;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns the unbounded entering column, if any.
    fn run(&mut self, allowed: usize) -> Option<usize> {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.z[j].is_negative()) else {
                return None;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                if self.t[i][c].is_positive() {
                    let ratio = &self.rhs[i] / &self.t[i][c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return Some(c),
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn basic_solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.total()];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[i].clone();
        }
        x
    }

    /// Simplex multipliers `π = c_Bᵀ B⁻¹` read off the artificial columns, whose cost is `art_cost`.
    fn duals(&self, art_cost: &Rational) -> Vec<Rational> {
        (0..self.m).map(|k| art_cost - &self.z[self.ncols + k]).collect()
    }
}

/// Solves `min cᵀx` (or pure feasibility when `c` is `None`) for `p` via the standard form.
fn solve_standard(p: &LpProblem, c: Option<&[Rational]>) -> StdOutcome {
    let n = p.n;
    let me = p.eq.rows();
    let mi = p.ineq.rows();
    let m = me + mi;
    let ncols = 2 * n + mi;
    let mut t = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut flip = Vec::with_capacity(m);
    for i in 0..m {
        let (row, b) = if i < me {
            (p.eq.row(i), &p.eq_rhs[i])
        } else {
            (p.ineq.row(i - me), &p.ineq_rhs[i - me])
        };
        let mut r: Vec<Rational> = Vec::with_capacity(ncols + m);
        r.extend(row.iter().cloned());
        r.extend(row.iter().map(|v| -v));
        for k in 0..mi {
            r.push(if i >= me && k == i - me { -Rational::one() } else { Rational::zero() });
        }
        let neg = b.is_negative();
        if neg {
            for v in r.iter_mut() {
                *v = -v.clone();
            }
        }
        for k in 0..m {
            r.push(if k == i { Rational::one() } else { Rational::zero() });
        }
        flip.push(neg);
        rhs.push(if neg { -b.clone() } else { b.clone() });
        t.push(r);
    }
    let mut tab = Tableau {
        m,
        ncols,
        t,
        rhs,
        z: Vec::new(),
        basis: (ncols..ncols + m).collect(),
    };
    let unflip = |pi: Vec<Rational>| -> (Vec<Rational>, Vec<Rational>) {
        let pi: Vec<Rational> = pi
            .into_iter()
            .zip(&flip)
            .map(|(v, &f)| if f { -v } else { v })
            .collect();
        (pi[..me].to_vec(), pi[me..].to_vec())
    };

    let mut phase1 = vec![Rational::zero(); ncols];
    phase1.extend(std::iter::repeat_n(Rational::one(), m));
    tab.price(&phase1);
    let r = tab.run(ncols);
    debug_assert!(r.is_none(), "phase one is bounded below");
    let infeas: Rational = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(b, _)| **b >= ncols)
        .fold(Rational::zero(), |acc, (_, v)| acc + v);
    if infeas.is_positive() {
        let (y_eq, y_ineq) = unflip(tab.duals(&Rational::one()));
        return StdOutcome::Infeasible { y_eq, y_ineq };
    }
    // Drive zero-level artificials out of the basis where a structural pivot exists.
    for r in 0..m {
        if tab.basis[r] >= ncols {
            if let Some(j) = (0..ncols).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }

    let mut cost = vec![Rational::zero(); ncols + m];
    if let Some(c) = c {
        for j in 0..n {
            cost[j] = c[j].clone();
            cost[n + j] = -c[j].clone();
        }
    }
    tab.price(&cost);
    let to_x = |xs: &[Rational]| -> Vec<Rational> { (0..n).map(|j| &xs[j] - &xs[n + j]).collect() };
    match tab.run(ncols) {
        None => {
            let xs = tab.basic_solution();
            let (y_eq, y_ineq) = unflip(tab.duals(&Rational::zero()));
            StdOutcome::Optimal {
                x: to_x(&xs),
                y_eq,
                y_ineq,
            }
        }
        Some(col) => {
            let xs = tab.basic_solution();
            let mut ds = vec![Rational::zero(); ncols + m];
            ds[col] = Rational::one();
            for (i, &b) in tab.basis.iter().enumerate() {
                ds[b] = -tab.t[i][col].clone();
            }
            StdOutcome::Unbounded {
                x: to_x(&xs),
                d: to_x(&ds),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rvec};

    #[test]
    fn zero_objective_point_is_feasible() {
        let mut p = LpProblem::new(1).minimize(rvec(&[0]));
        p.add_ge(rvec(&[1]), rat(0));
        p.add_ge(rvec(&[-1]), rat(0));
        let out = lp_solve(&p).unwrap();
        assert_eq!(
            out,
            LpOutcome::Feasible {
                certificate: LpCertificate::FeasiblePoint { x: rvec(&[0]) }
            }
        );
    }

    #[test]
    fn farkas_ray_for_empty_interval() {
        let mut p = LpProblem::new(1).minimize(rvec(&[0]));
        p.add_ge(rvec(&[1]), rat(1));
        p.add_ge(rvec(&[-1]), rat(0));
        let out = lp_solve(&p).unwrap();
        match out.certificate() {
            LpCertificate::FarkasInfeasibilityRay { y_eq, y_ineq } => {
                assert!(y_eq.is_empty());
                assert_eq!(y_ineq, &rvec(&[1, 1]));
            }
            other => panic!("unexpected certificate {other:?}"),
        }
        validate(&p, &out).unwrap();
    }

    #[test]
    fn maximise_bounded_variable() {
        let mut p = LpProblem::new(1).maximize(rvec(&[1]));
        p.add_le(rvec(&[1]), rat(3));
        p.add_ge(rvec(&[1]), rat(0));
        let out = lp_solve(&p).unwrap();
        let LpOutcome::Optimal { value, .. } = &out else { panic!("{out:?}") };
        assert_eq!(value, &rat(3));
        validate(&p, &out).unwrap();
    }

    #[test]
    fn unbounded_with_ray() {
        let mut p = LpProblem::new(2).minimize(rvec(&[-1, 0]));
        p.add_ge(rvec(&[1, -1]), rat(0));
        let out = lp_solve(&p).unwrap();
        assert!(matches!(out, LpOutcome::Unbounded { .. }));
        validate(&p, &out).unwrap();
    }

    #[test]
    fn strict_rows() {
        // x > 0 and -x >= 0 has no solution; the ray must put weight on the strict row.
        let mut p = LpProblem::new(1);
        p.add_gt(rvec(&[1]), rat(0));
        p.add_ge(rvec(&[-1]), rat(0));
        let out = lp_solve(&p).unwrap();
        assert!(out.is_infeasible());
        validate(&p, &out).unwrap();

        let mut q = LpProblem::new(2);
        q.add_gt(rvec(&[1, 1]), rat(0));
        q.add_eq(rvec(&[1, -1]), rat(0));
        let out = lp_solve(&q).unwrap();
        let x = out.point().unwrap();
        assert!(q.is_feasible_point(x));
    }

    #[test]
    fn redundant_equalities() {
        let mut p = LpProblem::new(2).minimize(rvec(&[1, 1]));
        p.add_eq(rvec(&[1, 1]), rat(2));
        p.add_eq(rvec(&[2, 2]), rat(4));
        p.add_ge(rvec(&[1, 0]), rat(0));
        p.add_ge(rvec(&[0, 1]), rat(0));
        let out = lp_solve(&p).unwrap();
        let LpOutcome::Optimal { value, .. } = &out else { panic!("{out:?}") };
        assert_eq!(value, &rat(2));
        validate(&p, &out).unwrap();
    }

    #[test]
    fn rejects_bad_dimensions() {
        let mut p = LpProblem::new(2).minimize(rvec(&[1]));
        p.add_ge(rvec(&[1, 0]), rat(0));
        assert!(matches!(lp_solve(&p), Err(LpError::Dimension(_))));
        let mut q = LpProblem::new(1).minimize(rvec(&[1]));
        q.add_gt(rvec(&[1]), rat(0));
        assert_eq!(lp_solve(&q), Err(LpError::StrictWithObjective));
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let mut p = LpProblem::new(1).minimize(rvec(&[0]));
        p.add_ge(rvec(&[1]), rat(1));
        p.add_ge(rvec(&[-1]), rat(0));
        let bad = LpOutcome::Infeasible {
            certificate: LpCertificate::FarkasInfeasibilityRay {
                y_eq: vec![],
                y_ineq: rvec(&[1, 2]),
            },
        };
        assert!(validate(&p, &bad).is_err());
        let bad_point = LpOutcome::Feasible {
            certificate: LpCertificate::FeasiblePoint { x: rvec(&[1]) },
        };
        assert!(validate(&p, &bad_point).is_err());
    }
}
