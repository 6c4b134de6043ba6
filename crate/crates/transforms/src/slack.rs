use anf_core::{AbsNormalProgram, EvalResult, QuadraticFunc};
use num_traits::{One, Zero};
use ratmath::{RatMatrix, Rational};

/// Slack reformulation. `lifted` is again an abs-normal program with smooth variables
/// `x = (t, w)` and switching vector `(z̃, z^w)`, so every ANF routine applies to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackProgram {
    pub base: AbsNormalProgram,
    pub lifted: AbsNormalProgram,
}

impl SlackProgram {
    pub fn m2(&self) -> usize {
        self.base.m2()
    }
}

/// Builds the lifted program
/// `c_E(t,ζ̃) = 0, c_I(t,ζ̃) − ζ^w = 0, z̃ = c_Z(t,ζ̃), z^w = w`.
pub fn to_slack(p: &AbsNormalProgram) -> SlackProgram {
    let (n_t, s, m2) = (p.n_t, p.s, p.m2());
    let n_x = n_t + m2;
    let block = n_x + s + m2;
    // Selection (t, w, ζ̃, ζ^w) ↦ (t, ζ̃).
    let mut sel = RatMatrix::zeros(n_t + s, block);
    for j in 0..n_t {
        sel[(j, j)] = Rational::one();
    }
    for i in 0..s {
        sel[(n_t + i, n_x + i)] = Rational::one();
    }
    let mut sel_f = RatMatrix::zeros(n_t, n_x);
    for j in 0..n_t {
        sel_f[(j, j)] = Rational::one();
    }
    let mut c_e: Vec<QuadraticFunc> = p.c_e.iter().map(|c| c.compose(&sel, None)).collect();
    for (k, c) in p.c_i.iter().enumerate() {
        c_e.push(c.compose(&sel, None).sub(&QuadraticFunc::coordinate(block, n_x + s + k)));
    }
    let mut c_z: Vec<QuadraticFunc> = p.c_z.iter().map(|c| c.compose(&sel, None)).collect();
    for k in 0..m2 {
        c_z.push(QuadraticFunc::coordinate(block, n_t + k));
    }
    let lifted = AbsNormalProgram {
        n_t: n_x,
        s: s + m2,
        f: p.f.compose(&sel_f, None),
        c_e,
        c_i: Vec::new(),
        c_z,
        smoothness: p.smoothness,
    };
    SlackProgram {
        base: p.clone(),
        lifted,
    }
}

/// Lifted point `(t, w)` with `|w| = c_I`. `w_k = c_I,k` unless `negate[k]` is set.
pub fn lift_point(e: &EvalResult, negate: &[bool]) -> Vec<Rational> {
    let mut x = e.t.clone();
    for (k, v) in e.value_i.iter().enumerate() {
        if negate.get(k).copied().unwrap_or(false) && !v.is_zero() {
            x.push(-v.clone());
        } else {
            x.push(v.clone());
        }
    }
    x
}
