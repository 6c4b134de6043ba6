use crate::multipliers::{validate_m_anf, validate_m_mpcc, MultiplierSet};
use crate::{StationarityError, StationarityEvidence, StationarityKind, StationarityVerdict, Status};
use anf_core::{constraint_jacobians, eval, AbsNormalProgram, EvalResult};
use num_traits::{One, Zero};
use ratmath::{lp_solve, LpCertificate, LpOutcome, LpProblem, Rational};
use serde::{Serialize, Serializer};
use transforms::{phi_inv, to_mpcc, MpccPoint, MpccProgram};

/// 3^10 case combinations.
pub const DEFAULT_CASE_CAP: u128 = 59_049;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    MuUZero,
    MuVZero,
    BothPositive,
    MuPlusZero,
    MuMinusZero,
    /// `[·]_i > |λ_Z,i|` with `λ_Z,i ≥ 0`.
    DominantNonneg,
    /// `[·]_i > |λ_Z,i|` with `λ_Z,i ≤ 0`.
    DominantNonpos,
}

fn one_based<S: Serializer>(i: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*i as u64 + 1)
}

/// Sign case chosen at a kink index (0-based internally, 1-based when serialized).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseChoice {
    #[serde(serialize_with = "one_based")]
    pub index: usize,
    pub case: Case,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseRefutation {
    pub cases: Vec<CaseChoice>,
    pub certificate: LpCertificate,
}

enum Row {
    Eq(Vec<Rational>),
    Ge(Vec<Rational>),
    Gt(Vec<Rational>),
}

type CaseRows = Vec<(Case, Vec<Row>)>;

enum Search {
    Found(Vec<Rational>, Vec<CaseChoice>),
    Refuted(Vec<CaseRefutation>),
}

/// Multiplier LP shared by all cases plus the per-index case rows.
struct System {
    base: LpProblem,
    indices: Vec<usize>,
    cases: Vec<CaseRows>,
}

impl System {
    fn count(&self) -> u128 {
        self.cases.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128)).unwrap_or(u128::MAX)
    }

    fn lp(&self, pick: &[usize]) -> LpProblem {
        let mut lp = self.base.clone();
        for (k, &c) in pick.iter().enumerate() {
            for r in &self.cases[k][c].1 {
                match r {
                    Row::Eq(a) => lp.add_eq(a.clone(), Rational::zero()),
                    Row::Ge(a) => {
                        lp.add_ge(a.clone(), Rational::zero());
                    }
                    Row::Gt(a) => {
                        lp.add_gt(a.clone(), Rational::zero());
                    }
                }
            }
        }
        lp
    }

    /// Case positions for a serialized choice, if it names each kink index once in order.
    fn pick_of(&self, choice: &[CaseChoice]) -> Option<Vec<usize>> {
        if choice.len() != self.indices.len() {
            return None;
        }
        choice
            .iter()
            .zip(&self.indices)
            .zip(&self.cases)
            .map(|((c, &i), rows)| if c.index == i { rows.iter().position(|r| r.0 == c.case) } else { None })
            .collect()
    }
}

/// Tries every combination of per-index cases, first index most significant.
fn enumerate(sys: &System, cap: u128) -> Result<Search, StationarityError> {
    let count = sys.count();
    if count > cap {
        return Err(StationarityError::CaseCap { count, cap });
    }
    let (indices, cases) = (&sys.indices, &sys.cases);
    let mut pick = vec![0usize; indices.len()];
    let mut refutations = Vec::new();
    loop {
        let lp = sys.lp(&pick);
        let choice: Vec<CaseChoice> = pick
            .iter()
            .enumerate()
            .map(|(k, &c)| CaseChoice {
                index: indices[k],
                case: cases[k][c].0,
            })
            .collect();
        let out = lp_solve(&lp).expect("well-formed multiplier LP");
        match out.point() {
            Some(x) => return Ok(Search::Found(x.to_vec(), choice)),
            None => refutations.push(CaseRefutation {
                cases: choice,
                certificate: out.certificate().clone(),
            }),
        }
        // Odometer step.
        let mut k = pick.len();
        loop {
            if k == 0 {
                return Ok(Search::Refuted(refutations));
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < cases[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}

fn unit(n: usize, j: usize, k: Rational) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[j] = k;
    v
}

/// Unknowns `(λ_E, λ_I, λ_Z)`; returns the system and the linear forms of `B_i`.
fn anf_system(p: &AbsNormalProgram, e: &EvalResult) -> (System, Vec<Vec<Rational>>) {
    let (m1, m2, s, n_t) = (p.m1(), p.m2(), p.s, p.n_t);
    let n = m1 + m2 + s;
    let (oi, oz) = (m1, m1 + m2);
    let j = constraint_jacobians(p, e);
    let one = Rational::one();
    // Coefficient rows of the t-gradient and of B_i as linear forms in the unknowns.
    let mut lp = LpProblem::new(n);
    let grad_f = p.f.gradient(&e.t);
    for col in 0..n_t {
        let mut r = vec![Rational::zero(); n];
        for k in 0..m1 {
            r[k] = j.d1_e[(k, col)].clone();
        }
        for k in 0..m2 {
            r[oi + k] = -j.d1_i[(k, col)].clone();
        }
        for k in 0..s {
            r[oz + k] = j.d1_z[(k, col)].clone();
        }
        lp.add_eq(r, -grad_f[col].clone());
    }
    let b_row = |i: usize| -> Vec<Rational> {
        let mut r = vec![Rational::zero(); n];
        for k in 0..m1 {
            r[k] = j.d2_e[(k, i)].clone();
        }
        for k in 0..m2 {
            r[oi + k] = -j.d2_i[(k, i)].clone();
        }
        for k in 0..s {
            r[oz + k] = j.d2_z[(k, i)].clone();
        }
        r
    };
    for k in 0..m2 {
        if e.active_i.contains(&k) {
            lp.add_ge(unit(n, oi + k, one.clone()), Rational::zero());
        } else {
            lp.add_eq(unit(n, oi + k, one.clone()), Rational::zero());
        }
    }
    let mut cases = Vec::new();
    for i in 0..s {
        let sigma = Rational::from_integer(e.sigma.0[i].into());
        let mut r = b_row(i);
        if e.sigma.0[i] != 0 {
            r[oz + i] -= sigma;
            lp.add_eq(r, Rational::zero());
            continue;
        }
        let mut mu_p = r.clone();
        mu_p[oz + i] -= &one;
        let mut mu_m = r;
        mu_m[oz + i] += &one;
        cases.push(vec![
            (Case::MuPlusZero, vec![Row::Eq(mu_p.clone())]),
            (Case::MuMinusZero, vec![Row::Eq(mu_m.clone())]),
            (Case::DominantNonneg, vec![Row::Ge(unit(n, oz + i, one.clone())), Row::Gt(mu_p)]),
            (Case::DominantNonpos, vec![Row::Ge(unit(n, oz + i, -one.clone())), Row::Gt(mu_m)]),
        ]);
    }
    let b_rows = (0..s).map(b_row).collect();
    let sys = System {
        base: lp,
        indices: e.alpha.clone(),
        cases,
    };
    (sys, b_rows)
}

/// Abs-normal M-stationarity at `e`. Unknowns are `(λ_E, λ_I, λ_Z)`.
pub fn check_m_stationary_anf(p: &AbsNormalProgram, e: &EvalResult) -> Result<StationarityVerdict, StationarityError> {
    if !e.is_feasible() {
        return Err(StationarityError::Infeasible);
    }
    let (m1, m2, s) = (p.m1(), p.m2(), p.s);
    let (oi, oz) = (m1, m1 + m2);
    let (sys, b_rows) = anf_system(p, e);
    let verdict = match enumerate(&sys, DEFAULT_CASE_CAP)? {
        Search::Found(w, choice) => {
            let lam_e = w[..m1].to_vec();
            let lam_i = w[oi..oz].to_vec();
            let lam_z = w[oz..].to_vec();
            let mut mu_plus = Vec::with_capacity(s);
            let mut mu_minus = Vec::with_capacity(s);
            for i in 0..s {
                let b = ratmath::dot(&b_rows[i], &w);
                mu_plus.push(&b - &lam_z[i]);
                mu_minus.push(&b + &lam_z[i]);
            }
            let ms = MultiplierSet {
                lam_e,
                lam_i,
                lam_z,
                mu_u: None,
                mu_v: None,
                mu_plus: Some(mu_plus),
                mu_minus: Some(mu_minus),
            };
            validate_m_anf(p, e, &ms)?;
            StationarityVerdict {
                kind: StationarityKind::MAnf,
                status: Status::Holds,
                evidence: StationarityEvidence::Multipliers { multipliers: ms, cases: choice },
            }
        }
        Search::Refuted(refutations) => StationarityVerdict {
            kind: StationarityKind::MAnf,
            status: Status::Fails,
            evidence: StationarityEvidence::NoMultipliers { refutations },
        },
    };
    Ok(verdict)
}

/// Unknowns `(λ_eq, λ_I, μ_u, μ_v)` with `λ_eq = (λ_E, λ_Z)`.
fn mpcc_system(mp: &MpccProgram, pt: &MpccPoint) -> System {
    let (meq, m2, s, dim) = (mp.eq.len(), mp.ineq.len(), mp.s, mp.dim());
    let n = meq + m2 + 2 * s;
    let (oi, ou, ov) = (meq, meq + m2, meq + m2 + s);
    let y = pt.stacked();
    let one = Rational::one();
    let eq_g: Vec<Vec<Rational>> = mp.eq.iter().map(|c| c.gradient(&y)).collect();
    let in_g: Vec<Vec<Rational>> = mp.ineq.iter().map(|c| c.gradient(&y)).collect();
    let grad_f = mp.f.gradient(&y);
    let mut lp = LpProblem::new(n);
    for col in 0..dim {
        let mut r = vec![Rational::zero(); n];
        for k in 0..meq {
            r[k] = eq_g[k][col].clone();
        }
        for k in 0..m2 {
            r[oi + k] = -in_g[k][col].clone();
        }
        for i in 0..s {
            if col == mp.u_index(i) {
                r[ou + i] = -one.clone();
            }
            if col == mp.v_index(i) {
                r[ov + i] = -one.clone();
            }
        }
        lp.add_eq(r, -grad_f[col].clone());
    }
    for (k, c) in mp.ineq.iter().enumerate() {
        if c.eval(&y).is_zero() {
            lp.add_ge(unit(n, oi + k, one.clone()), Rational::zero());
        } else {
            lp.add_eq(unit(n, oi + k, one.clone()), Rational::zero());
        }
    }
    let (up, vp, d) = (pt.uplus(), pt.vplus(), pt.degenerate());
    for i in 0..s {
        if up.contains(&i) {
            lp.add_eq(unit(n, ou + i, one.clone()), Rational::zero());
        }
        if vp.contains(&i) {
            lp.add_eq(unit(n, ov + i, one.clone()), Rational::zero());
        }
    }
    let indices: Vec<usize> = d.iter().copied().collect();
    let cases: Vec<CaseRows> = indices
        .iter()
        .map(|&i| {
            vec![
                (Case::MuUZero, vec![Row::Eq(unit(n, ou + i, one.clone()))]),
                (Case::MuVZero, vec![Row::Eq(unit(n, ov + i, one.clone()))]),
                (
                    Case::BothPositive,
                    vec![Row::Gt(unit(n, ou + i, one.clone())), Row::Gt(unit(n, ov + i, one.clone()))],
                ),
            ]
        })
        .collect();
    System { base: lp, indices, cases }
}

/// MPCC M-stationarity at `pt`.
pub fn check_m_stationary_mpcc(mp: &MpccProgram, pt: &MpccPoint) -> Result<StationarityVerdict, StationarityError> {
    if !mp.is_feasible(pt) {
        return Err(StationarityError::Infeasible);
    }
    let (meq, m2, s) = (mp.eq.len(), mp.ineq.len(), mp.s);
    let (oi, ou, ov) = (meq, meq + m2, meq + m2 + s);
    let sys = mpcc_system(mp, pt);
    let verdict = match enumerate(&sys, DEFAULT_CASE_CAP)? {
        Search::Found(w, choice) => {
            let ms = MultiplierSet {
                lam_e: w[..mp.m1].to_vec(),
                lam_z: w[mp.m1..meq].to_vec(),
                lam_i: w[oi..ou].to_vec(),
                mu_u: Some(w[ou..ov].to_vec()),
                mu_v: Some(w[ov..].to_vec()),
                mu_plus: None,
                mu_minus: None,
            };
            validate_m_mpcc(mp, pt, &ms)?;
            StationarityVerdict {
                kind: StationarityKind::MMpcc,
                status: Status::Holds,
                evidence: StationarityEvidence::Multipliers { multipliers: ms, cases: choice },
            }
        }
        Search::Refuted(refutations) => StationarityVerdict {
            kind: StationarityKind::MMpcc,
            status: Status::Fails,
            evidence: StationarityEvidence::NoMultipliers { refutations },
        },
    };
    Ok(verdict)
}

/// M-stationarity of `p` at `t` in the chosen form; the MPCC form is checked at `(t, [z̃]⁺, [z̃]⁻)`.
pub fn check_m_stationary(p: &AbsNormalProgram, t: &[Rational], form: crate::Form) -> Result<StationarityVerdict, StationarityError> {
    let e = eval(p, t)?;
    match form {
        crate::Form::Anf => check_m_stationary_anf(p, &e),
        crate::Form::Mpcc => check_m_stationary_mpcc(&to_mpcc(p), &phi_inv(&e.t, &e.z)),
    }
}

fn recheck_refutations(sys: &System, refutations: &[CaseRefutation]) -> Result<(), String> {
    if refutations.len() as u128 != sys.count() {
        return Err(format!("{} refutations for {} case combinations", refutations.len(), sys.count()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for r in refutations {
        let pick = sys.pick_of(&r.cases).ok_or("refutation names an unknown case")?;
        if !seen.insert(pick.clone()) {
            return Err("case combination refuted twice".into());
        }
        let out = LpOutcome::Infeasible {
            certificate: r.certificate.clone(),
        };
        ratmath::validate(&sys.lp(&pick), &out).map_err(|e| format!("refutation certificate: {}", e.0))?;
    }
    Ok(())
}

/// Re-validates an M-stationarity verdict: multipliers by substitution, refutations by
/// checking one Farkas certificate per case combination.
pub fn recheck_m_anf(p: &AbsNormalProgram, e: &EvalResult, v: &StationarityVerdict) -> Result<(), String> {
    match (&v.status, &v.evidence) {
        (Status::Holds, StationarityEvidence::Multipliers { multipliers, .. }) => {
            validate_m_anf(p, e, multipliers).map_err(|e| e.to_string())
        }
        (Status::Fails, StationarityEvidence::NoMultipliers { refutations }) => recheck_refutations(&anf_system(p, e).0, refutations),
        _ => Err("evidence does not match status".into()),
    }
}

pub fn recheck_m_mpcc(mp: &MpccProgram, pt: &MpccPoint, v: &StationarityVerdict) -> Result<(), String> {
    match (&v.status, &v.evidence) {
        (Status::Holds, StationarityEvidence::Multipliers { multipliers, .. }) => {
            validate_m_mpcc(mp, pt, multipliers).map_err(|e| e.to_string())
        }
        (Status::Fails, StationarityEvidence::NoMultipliers { refutations }) => recheck_refutations(&mpcc_system(mp, pt), refutations),
        _ => Err("evidence does not match status".into()),
    }
}
