use crate::program::{AbsNormalProgram, SignatureVector};
use crate::quadratic::QuadraticFunc;
use num_traits::{Signed, Zero};
use ratmath::{sign, RatMatrix, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnfError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid program: {0}")]
    Invalid(String),
    #[error("signature {given} is not definite or does not dominate {actual}")]
    Signature { given: String, actual: String },
}

/// Evaluation of a program at a point `t`. Index sets are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub t: Vec<Rational>,
    pub z: Vec<Rational>,
    pub sigma: SignatureVector,
    pub alpha: Vec<usize>,
    pub active_i: Vec<usize>,
    pub residual_e: Vec<Rational>,
    pub value_i: Vec<Rational>,
}

impl EvalResult {
    /// `(t, |z|)`, the argument of every constraint function.
    pub fn block_point(&self) -> Vec<Rational> {
        let mut y = self.t.clone();
        y.extend(self.z.iter().map(|x| x.abs()));
        y
    }

    pub fn is_feasible(&self) -> bool {
        self.residual_e.iter().all(Zero::is_zero) && self.value_i.iter().all(|v| !v.is_negative())
    }

    pub fn is_kink_free(&self) -> bool {
        self.alpha.is_empty()
    }
}

fn check_t(p: &AbsNormalProgram, t: &[Rational]) -> Result<(), AnfError> {
    if t.len() != p.n_t {
        return Err(AnfError::Dimension(format!("point has {} entries, expected n_t = {}", t.len(), p.n_t)));
    }
    Ok(())
}

/// Forward substitution `z_i = cZ_i(t, |z_1|, …, |z_{i-1}|)`.
pub fn eval(p: &AbsNormalProgram, t: &[Rational]) -> Result<EvalResult, AnfError> {
    check_t(p, t)?;
    let report = p.validate();
    if !report.is_valid() {
        return Err(AnfError::Invalid(report.to_string()));
    }
    let mut y: Vec<Rational> = t.to_vec();
    y.resize(p.block(), Rational::zero());
    let mut z = Vec::with_capacity(p.s);
    for (i, c) in p.c_z.iter().enumerate() {
        let zi = c.eval(&y);
        y[p.n_t + i] = zi.abs();
        z.push(zi);
    }
    let sigma = SignatureVector(z.iter().map(sign).collect());
    let alpha = (0..p.s).filter(|&i| z[i].is_zero()).collect();
    let residual_e: Vec<Rational> = p.c_e.iter().map(|c| c.eval(&y)).collect();
    let value_i: Vec<Rational> = p.c_i.iter().map(|c| c.eval(&y)).collect();
    let active_i = (0..p.m2()).filter(|&i| value_i[i].is_zero()).collect();
    Ok(EvalResult {
        t: t.to_vec(),
        z,
        sigma,
        alpha,
        active_i,
        residual_e,
        value_i,
    })
}

/// Solves `z = cZ(t, Σ z)` for a fixed sign matrix `Σ = diag(sigma)`.
pub fn solve_fixed_signature(
    p: &AbsNormalProgram,
    sigma: &SignatureVector,
    t: &[Rational],
) -> Result<Vec<Rational>, AnfError> {
    check_t(p, t)?;
    if sigma.len() != p.s {
        return Err(AnfError::Dimension(format!("signature has {} entries, expected s = {}", sigma.len(), p.s)));
    }
    let mut y: Vec<Rational> = t.to_vec();
    y.resize(p.block(), Rational::zero());
    let mut z = Vec::with_capacity(p.s);
    for (i, c) in p.c_z.iter().enumerate() {
        let zi = c.eval(&y);
        y[p.n_t + i] = Rational::from_integer(sigma.0[i].into()) * &zi;
        z.push(zi);
    }
    Ok(z)
}

/// Partial Jacobians of all constraint families at `(t, |z|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintJacobians {
    pub d1_e: RatMatrix,
    pub d2_e: RatMatrix,
    pub d1_i: RatMatrix,
    pub d2_i: RatMatrix,
    pub d1_z: RatMatrix,
    pub d2_z: RatMatrix,
}

fn split_jacobian(funcs: &[QuadraticFunc], y: &[Rational], n_t: usize, s: usize) -> (RatMatrix, RatMatrix) {
    let mut d1 = RatMatrix::zeros(0, n_t);
    let mut d2 = RatMatrix::zeros(0, s);
    for c in funcs {
        let g = c.gradient(y);
        d1.push_row(g[..n_t].to_vec());
        d2.push_row(g[n_t..].to_vec());
    }
    (d1, d2)
}

pub fn constraint_jacobians(p: &AbsNormalProgram, e: &EvalResult) -> ConstraintJacobians {
    let y = e.block_point();
    let (d1_e, d2_e) = split_jacobian(&p.c_e, &y, p.n_t, p.s);
    let (d1_i, d2_i) = split_jacobian(&p.c_i, &y, p.n_t, p.s);
    let (d1_z, d2_z) = split_jacobian(&p.c_z, &y, p.n_t, p.s);
    ConstraintJacobians {
        d1_e,
        d2_e,
        d1_i,
        d2_i,
        d1_z,
        d2_z,
    }
}

/// `[I − ∂₂cZ Σ]⁻¹ ∂₁cZ` at `(t, |z|)`, computed row by row since `∂₂cZ Σ` is strictly lower triangular.
pub fn jacobian_z(p: &AbsNormalProgram, e: &EvalResult, sigma: &SignatureVector) -> Result<RatMatrix, AnfError> {
    if !sigma.is_definite() || !sigma.succeq(&e.sigma) {
        return Err(AnfError::Signature {
            given: sigma.to_string(),
            actual: e.sigma.to_string(),
        });
    }
    let jac = constraint_jacobians(p, e);
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(p.s);
    for i in 0..p.s {
        let mut r = jac.d1_z.row(i).to_vec();
        for (j, prev) in rows.iter().enumerate() {
            let k = &jac.d2_z[(i, j)] * Rational::from_integer(sigma.0[j].into());
            if k.is_zero() {
                continue;
            }
            for (a, b) in r.iter_mut().zip(prev) {
                *a += &k * b;
            }
        }
        rows.push(r);
    }
    Ok(RatMatrix::from_rows(p.n_t, rows))
}
