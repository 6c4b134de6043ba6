use anf_core::{AbsNormalProgram, QuadraticFunc};
use num_traits::{One, Signed, Zero};
use ratmath::{RatMatrix, Rational};
use std::collections::BTreeSet;

/// Counterpart MPCC over variables `(x, u, v)`. The equality list holds the `m1`
/// substituted rows of `c_E` followed by the `s` switching rows `c_Z(x,u+v) − (u−v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpccProgram {
    pub n_x: usize,
    pub s: usize,
    pub m1: usize,
    pub f: QuadraticFunc,
    pub eq: Vec<QuadraticFunc>,
    pub ineq: Vec<QuadraticFunc>,
    /// `(u_i, v_i)` variable indices.
    pub pairs: Vec<(usize, usize)>,
}

impl MpccProgram {
    pub fn dim(&self) -> usize {
        self.n_x + 2 * self.s
    }

    pub fn u_index(&self, i: usize) -> usize {
        self.n_x + i
    }

    pub fn v_index(&self, i: usize) -> usize {
        self.n_x + self.s + i
    }

    /// Exact feasibility of `(x, u, v)`.
    pub fn is_feasible(&self, pt: &MpccPoint) -> bool {
        let y = pt.stacked();
        pt.is_complementary()
            && self.eq.iter().all(|c| c.eval(&y).is_zero())
            && self.ineq.iter().all(|c| !c.eval(&y).is_negative())
    }
}

pub fn to_mpcc(p: &AbsNormalProgram) -> MpccProgram {
    let (n_x, s) = (p.n_t, p.s);
    let dim = n_x + 2 * s;
    // (x, u, v) ↦ (x, u + v)
    let mut sub = RatMatrix::zeros(n_x + s, dim);
    for j in 0..n_x {
        sub[(j, j)] = Rational::one();
    }
    for i in 0..s {
        sub[(n_x + i, n_x + i)] = Rational::one();
        sub[(n_x + i, n_x + s + i)] = Rational::one();
    }
    let mut sel_f = RatMatrix::zeros(n_x, dim);
    for j in 0..n_x {
        sel_f[(j, j)] = Rational::one();
    }
    let mut eq: Vec<QuadraticFunc> = p.c_e.iter().map(|c| c.compose(&sub, None)).collect();
    for (i, c) in p.c_z.iter().enumerate() {
        let diff = QuadraticFunc::coordinate(dim, n_x + i).sub(&QuadraticFunc::coordinate(dim, n_x + s + i));
        eq.push(c.compose(&sub, None).sub(&diff));
    }
    MpccProgram {
        n_x,
        s,
        m1: p.m1(),
        f: p.f.compose(&sel_f, None),
        eq,
        ineq: p.c_i.iter().map(|c| c.compose(&sub, None)).collect(),
        pairs: (0..s).map(|i| (n_x + i, n_x + s + i)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpccPoint {
    pub x: Vec<Rational>,
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

impl MpccPoint {
    pub fn stacked(&self) -> Vec<Rational> {
        let mut y = self.x.clone();
        y.extend(self.u.iter().cloned());
        y.extend(self.v.iter().cloned());
        y
    }

    pub fn from_stacked(n_x: usize, s: usize, y: &[Rational]) -> MpccPoint {
        MpccPoint {
            x: y[..n_x].to_vec(),
            u: y[n_x..n_x + s].to_vec(),
            v: y[n_x + s..n_x + 2 * s].to_vec(),
        }
    }

    pub fn is_complementary(&self) -> bool {
        self.u.len() == self.v.len()
            && self
                .u
                .iter()
                .zip(&self.v)
                .all(|(a, b)| !a.is_negative() && !b.is_negative() && (a * b).is_zero())
    }

    pub fn uplus(&self) -> BTreeSet<usize> {
        (0..self.u.len()).filter(|&i| self.u[i].is_positive()).collect()
    }

    pub fn vplus(&self) -> BTreeSet<usize> {
        (0..self.v.len()).filter(|&i| self.v[i].is_positive()).collect()
    }

    /// Degenerate pairs `u_i = v_i = 0`.
    pub fn degenerate(&self) -> BTreeSet<usize> {
        (0..self.u.len())
            .filter(|&i| self.u[i].is_zero() && self.v[i].is_zero())
            .collect()
    }
}
