use anf_core::SignatureVector;
use num_traits::{One, Zero};
use ratmath::{PolyCone, RatMatrix, Rational};
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use transforms::MpccPoint;

/// Trusted tangent cones of branch problems NLP(σ) of the original program, each a union
/// of polyhedral pieces over `(δt, δz̃)`. Used only where no certificate applies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TangentAnnotations {
    pub pieces: BTreeMap<SignatureVector, Vec<PolyCone>>,
}

impl TangentAnnotations {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn get(&self, sigma: &SignatureVector) -> Option<&Vec<PolyCone>> {
        self.pieces.get(sigma)
    }
}

/// Lifts a piece over `(δt, δz̃)` to the slack branch over `(δt, δw, δz̃, δz^w)` as the graph
/// `δz^w = δw = Σ^w (∂₁c_I δt + ∂₂c_I Σ^t δz̃)`.
pub fn graph_transport(
    c: &PolyCone,
    n_t: usize,
    s: usize,
    d1_i: &RatMatrix,
    d2_i: &RatMatrix,
    sigma_t: &SignatureVector,
    sigma_w: &SignatureVector,
) -> PolyCone {
    let m2 = d1_i.rows();
    let (w0, z0, zw0) = (n_t, n_t + m2, n_t + m2 + s);
    let dim = n_t + 2 * m2 + s;
    // Embedding (δt, δz̃) ↦ lifted coordinates.
    let embed = |r: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); dim];
        out[..n_t].clone_from_slice(&r[..n_t]);
        out[z0..z0 + s].clone_from_slice(&r[n_t..n_t + s]);
        out
    };
    let mut eq: Vec<Vec<Rational>> = c.eq.row_vecs().iter().map(|r| embed(r)).collect();
    let ineq: Vec<Vec<Rational>> = c.ineq.row_vecs().iter().map(|r| embed(r)).collect();
    for k in 0..m2 {
        let mut r = vec![Rational::zero(); dim];
        r[zw0 + k] = Rational::one();
        r[w0 + k] = -Rational::one();
        eq.push(r);
        let sw = Rational::from_integer(sigma_w.0[k].into());
        let mut r = vec![Rational::zero(); dim];
        r[w0 + k] = Rational::one();
        for j in 0..n_t {
            r[j] = -(&sw * &d1_i[(k, j)]);
        }
        for i in 0..s {
            r[z0 + i] = -(&sw * &d2_i[(k, i)] * Rational::from_integer(sigma_t.0[i].into()));
        }
        eq.push(r);
    }
    PolyCone::from_rows(dim, eq, ineq)
}

/// Pulls a piece over `(δx, δz̃)` back to the MPCC branch `P` at `pt` over `(δx, δu, δv)`.
pub fn psi_transport(c: &PolyCone, n_x: usize, pt: &MpccPoint, part: &BTreeSet<usize>) -> PolyCone {
    let s = pt.u.len();
    let dim = n_x + 2 * s;
    let lift = |r: &[Rational]| -> Vec<Rational> {
        let mut out = r[..n_x].to_vec();
        out.extend(r[n_x..].iter().cloned());
        out.extend(r[n_x..].iter().map(|x| -x.clone()));
        out
    };
    let mut eq: Vec<Vec<Rational>> = c.eq.row_vecs().iter().map(|r| lift(r)).collect();
    let ineq: Vec<Vec<Rational>> = c.ineq.row_vecs().iter().map(|r| lift(r)).collect();
    let (vp, d) = (pt.vplus(), pt.degenerate());
    for i in 0..s {
        let mut r = vec![Rational::zero(); dim];
        let fix_u = vp.contains(&i) || (d.contains(&i) && part.contains(&i));
        r[if fix_u { n_x + i } else { n_x + s + i }] = Rational::one();
        eq.push(r);
    }
    PolyCone::from_rows(dim, eq, ineq)
}
