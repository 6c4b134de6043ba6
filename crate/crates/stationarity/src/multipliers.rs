use crate::StationarityError;
use anf_core::{constraint_jacobians, AbsNormalProgram, EvalResult};
use num_traits::{Signed, Zero};
use ratmath::rational::serde_rational_vec;
use ratmath::{format_rational, Rational, RatMatrix};
use serde::{Serialize, Serializer};
use transforms::{MpccPoint, MpccProgram};

fn ser_opt<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => serde_rational_vec::serialize(v, s),
        None => s.serialize_none(),
    }
}

/// Multipliers of either M-stationarity system. `mu_u`/`mu_v` belong to the MPCC form,
/// `mu_plus`/`mu_minus` to the abs-normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplierSet {
    #[serde(with = "serde_rational_vec")]
    pub lam_e: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub lam_i: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub lam_z: Vec<Rational>,
    #[serde(serialize_with = "ser_opt", skip_serializing_if = "Option::is_none")]
    pub mu_u: Option<Vec<Rational>>,
    #[serde(serialize_with = "ser_opt", skip_serializing_if = "Option::is_none")]
    pub mu_v: Option<Vec<Rational>>,
    #[serde(serialize_with = "ser_opt", skip_serializing_if = "Option::is_none")]
    pub mu_plus: Option<Vec<Rational>>,
    #[serde(serialize_with = "ser_opt", skip_serializing_if = "Option::is_none")]
    pub mu_minus: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    AnfToMpcc,
    MpccToAnf,
}

fn bad<T>(msg: String) -> Result<T, StationarityError> {
    Err(StationarityError::InvalidMultipliers(msg))
}

fn check_len(name: &str, v: &[Rational], n: usize) -> Result<(), StationarityError> {
    if v.len() != n {
        return bad(format!("{name} has {} entries, expected {n}", v.len()));
    }
    Ok(())
}

fn check_lam_i(lam_i: &[Rational], values: &[Rational]) -> Result<(), StationarityError> {
    for (k, (l, c)) in lam_i.iter().zip(values).enumerate() {
        if l.is_negative() {
            return bad(format!("lamI{} = {} is negative", k + 1, format_rational(l)));
        }
        if !(l * c).is_zero() {
            return bad(format!("lamI{} is nonzero on an inactive inequality", k + 1));
        }
    }
    Ok(())
}

/// `Mᵀy` for a row-stacked Jacobian `M`.
fn tr(m: &RatMatrix, y: &[Rational]) -> Vec<Rational> {
    m.tr_mul_vec(y)
}

/// `B = ∂₂c_Eᵀλ_E − ∂₂c_Iᵀλ_I + ∂₂c_Zᵀλ_Z` and the `t`-gradient residual of the abs-normal system.
fn anf_terms(p: &AbsNormalProgram, e: &EvalResult, ms: &MultiplierSet) -> (Vec<Rational>, Vec<Rational>) {
    let j = constraint_jacobians(p, e);
    let add = |a: Vec<Rational>, b: Vec<Rational>| -> Vec<Rational> { a.into_iter().zip(b).map(|(x, y)| x + y).collect() };
    let neg_i: Vec<Rational> = ms.lam_i.iter().map(|x| -x).collect();
    let grad_f = p.f.gradient(&e.t);
    let a = add(add(add(grad_f, tr(&j.d1_e, &ms.lam_e)), tr(&j.d1_i, &neg_i)), tr(&j.d1_z, &ms.lam_z));
    let b = add(add(tr(&j.d2_e, &ms.lam_e), tr(&j.d2_i, &neg_i)), tr(&j.d2_z, &ms.lam_z));
    (a, b)
}

/// Checks the abs-normal M-stationarity conditions by substitution. `mu_plus`/`mu_minus`, when
/// present, must match their defining identities.
pub fn validate_m_anf(p: &AbsNormalProgram, e: &EvalResult, ms: &MultiplierSet) -> Result<(), StationarityError> {
    check_len("lamE", &ms.lam_e, p.m1())?;
    check_len("lamI", &ms.lam_i, p.m2())?;
    check_len("lamZ", &ms.lam_z, p.s)?;
    check_lam_i(&ms.lam_i, &e.value_i)?;
    let (a, b) = anf_terms(p, e, ms);
    if let Some(j) = a.iter().position(|x| !x.is_zero()) {
        return bad(format!("t-gradient row {} is {}", j + 1, format_rational(&a[j])));
    }
    let mu_p: Vec<Rational> = b.iter().zip(&ms.lam_z).map(|(b, l)| b - l).collect();
    let mu_m: Vec<Rational> = b.iter().zip(&ms.lam_z).map(|(b, l)| b + l).collect();
    if ms.mu_plus.as_ref().is_some_and(|v| *v != mu_p) || ms.mu_minus.as_ref().is_some_and(|v| *v != mu_m) {
        return bad("muPlus/muMinus do not match their definitions".into());
    }
    for i in 0..p.s {
        let sigma = Rational::from_integer(e.sigma.0[i].into());
        if e.sigma.0[i] != 0 {
            if b[i] != &ms.lam_z[i] * sigma {
                return bad(format!("switching row {} violates the inactive-kink identity", i + 1));
            }
        } else if !(&mu_p[i] * &mu_m[i]).is_zero() && b[i] <= ms.lam_z[i].abs() {
            return bad(format!("kink {} violates the sign disjunction", i + 1));
        }
    }
    Ok(())
}

/// Checks the MPCC M-stationarity conditions by substitution; `lam_e` and `lam_z` together form the
/// multiplier of the equality list.
pub fn validate_m_mpcc(mp: &MpccProgram, pt: &MpccPoint, ms: &MultiplierSet) -> Result<(), StationarityError> {
    let (Some(mu_u), Some(mu_v)) = (&ms.mu_u, &ms.mu_v) else {
        return bad("muU/muV missing".into());
    };
    check_len("lamE", &ms.lam_e, mp.m1)?;
    check_len("lamZ", &ms.lam_z, mp.s)?;
    check_len("lamI", &ms.lam_i, mp.ineq.len())?;
    check_len("muU", mu_u, mp.s)?;
    check_len("muV", mu_v, mp.s)?;
    let y = pt.stacked();
    let values: Vec<Rational> = mp.ineq.iter().map(|c| c.eval(&y)).collect();
    check_lam_i(&ms.lam_i, &values)?;
    let mut g = mp.f.gradient(&y);
    let lam_eq = ms.lam_e.iter().chain(&ms.lam_z);
    for (c, l) in mp.eq.iter().zip(lam_eq) {
        for (gj, cj) in g.iter_mut().zip(c.gradient(&y)) {
            *gj += l * cj;
        }
    }
    for (c, l) in mp.ineq.iter().zip(&ms.lam_i) {
        for (gj, cj) in g.iter_mut().zip(c.gradient(&y)) {
            *gj -= l * cj;
        }
    }
    for i in 0..mp.s {
        g[mp.u_index(i)] -= &mu_u[i];
        g[mp.v_index(i)] -= &mu_v[i];
    }
    if let Some(j) = g.iter().position(|x| !x.is_zero()) {
        return bad(format!("Lagrangian gradient entry {} is {}", j + 1, format_rational(&g[j])));
    }
    let (up, vp, d) = (pt.uplus(), pt.vplus(), pt.degenerate());
    for i in 0..mp.s {
        if up.contains(&i) && !mu_u[i].is_zero() {
            return bad(format!("muU{} must vanish where u > 0", i + 1));
        }
        if vp.contains(&i) && !mu_v[i].is_zero() {
            return bad(format!("muV{} must vanish where v > 0", i + 1));
        }
        let both_pos = mu_u[i].is_positive() && mu_v[i].is_positive();
        if d.contains(&i) && !both_pos && !(&mu_u[i] * &mu_v[i]).is_zero() {
            return bad(format!("pair {} violates the sign disjunction", i + 1));
        }
    }
    Ok(())
}

/// Maps multipliers between the two M-stationarity systems at `(t, z)` and `(t, [z]⁺, [z]⁻)`.
/// The input is validated first and the output is validated before it is returned.
pub fn translate_multipliers(
    ms: &MultiplierSet,
    direction: Direction,
    p: &AbsNormalProgram,
    e: &EvalResult,
) -> Result<MultiplierSet, StationarityError> {
    let mp = transforms::to_mpcc(p);
    let pt = transforms::phi_inv(&e.t, &e.z);
    let out = match direction {
        Direction::AnfToMpcc => {
            validate_m_anf(p, e, ms)?;
            let (_, b) = anf_terms(p, e, ms);
            MultiplierSet {
                mu_u: Some(b.iter().zip(&ms.lam_z).map(|(b, l)| b - l).collect()),
                mu_v: Some(b.iter().zip(&ms.lam_z).map(|(b, l)| b + l).collect()),
                mu_plus: None,
                mu_minus: None,
                ..ms.clone()
            }
        }
        Direction::MpccToAnf => {
            validate_m_mpcc(&mp, &pt, ms)?;
            MultiplierSet {
                mu_plus: ms.mu_u.clone(),
                mu_minus: ms.mu_v.clone(),
                mu_u: None,
                mu_v: None,
                ..ms.clone()
            }
        }
    };
    match direction {
        Direction::AnfToMpcc => validate_m_mpcc(&mp, &pt, &out)?,
        Direction::MpccToAnf => validate_m_anf(p, e, &out)?,
    }
    Ok(out)
}
