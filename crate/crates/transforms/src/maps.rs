use crate::mpcc::MpccPoint;
use crate::TransformError;
use num_traits::{Signed, Zero};
use ratmath::Rational;

/// `(x, u, v) ↦ (x, u − v)`.
pub fn phi(pt: &MpccPoint) -> Result<(Vec<Rational>, Vec<Rational>), TransformError> {
    if !pt.is_complementary() {
        return Err(TransformError::Infeasible("u, v violate 0 ≤ u ⊥ v ≥ 0".into()));
    }
    Ok((pt.x.clone(), pt.u.iter().zip(&pt.v).map(|(a, b)| a - b).collect()))
}

/// `(x, z̃) ↦ (x, [z̃]⁺, [z̃]⁻)`.
pub fn phi_inv(x: &[Rational], z: &[Rational]) -> MpccPoint {
    let pos = |r: &Rational| if r.is_positive() { r.clone() } else { Rational::zero() };
    MpccPoint {
        x: x.to_vec(),
        u: z.iter().map(pos).collect(),
        v: z.iter().map(|r| pos(&-r)).collect(),
    }
}

/// `(δx, δu, δv) ↦ (δx, δu − δv)` on stacked directions.
pub fn psi(n_x: usize, s: usize, d: &[Rational]) -> Vec<Rational> {
    let mut out = d[..n_x].to_vec();
    out.extend((0..s).map(|i| &d[n_x + i] - &d[n_x + s + i]));
    out
}

/// Inverse of `psi` for directions at the anchor `pt`:
/// `(δz̃_i, 0)` on `U₊`, `(0, −δz̃_i)` on `V₊`, `([δz̃_i]⁺, [δz̃_i]⁻)` on `D`.
pub fn psi_inv(n_x: usize, d: &[Rational], pt: &MpccPoint) -> Vec<Rational> {
    let s = pt.u.len();
    let mut du = Vec::with_capacity(s);
    let mut dv = Vec::with_capacity(s);
    for i in 0..s {
        let dz = &d[n_x + i];
        if pt.u[i].is_positive() {
            du.push(dz.clone());
            dv.push(Rational::zero());
        } else if pt.v[i].is_positive() {
            du.push(Rational::zero());
            dv.push(-dz.clone());
        } else if dz.is_positive() {
            du.push(dz.clone());
            dv.push(Rational::zero());
        } else {
            du.push(Rational::zero());
            dv.push(-dz.clone());
        }
    }
    let mut out = d[..n_x].to_vec();
    out.extend(du);
    out.extend(dv);
    out
}
