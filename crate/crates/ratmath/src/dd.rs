//! Polyhedral cones and the double description conversion between H- and V-form.

use crate::matrix::RatMatrix;
use crate::rational::{dot, format_vec, is_zero_vec, primitive, serde_rational_rows, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `{d ∈ R^dim : E d = 0, I d ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCone {
    pub dim: usize,
    pub eq: RatMatrix,
    pub ineq: RatMatrix,
}

/// Conic hull of `rays` plus the linear span of `lineality`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    pub dim: usize,
    #[serde(with = "serde_rational_rows")]
    pub rays: Vec<Vec<Rational>>,
    #[serde(with = "serde_rational_rows")]
    pub lineality: Vec<Vec<Rational>>,
}

/// Serialisable row form of a [`PolyCone`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeRows {
    #[serde(default, with = "serde_rational_rows")]
    pub eq: Vec<Vec<Rational>>,
    #[serde(default, with = "serde_rational_rows")]
    pub ineq: Vec<Vec<Rational>>,
}

impl PolyCone {
    pub fn new(dim: usize, eq: RatMatrix, ineq: RatMatrix) -> Self {
        assert_eq!(eq.cols(), dim, "equality block width");
        assert_eq!(ineq.cols(), dim, "inequality block width");
        PolyCone { dim, eq, ineq }
    }

    pub fn from_rows(dim: usize, eq: Vec<Vec<Rational>>, ineq: Vec<Vec<Rational>>) -> Self {
        PolyCone::new(dim, RatMatrix::from_rows(dim, eq), RatMatrix::from_rows(dim, ineq))
    }

    pub fn full(dim: usize) -> Self {
        PolyCone::new(dim, RatMatrix::zeros(0, dim), RatMatrix::zeros(0, dim))
    }

    pub fn zero(dim: usize) -> Self {
        PolyCone::new(dim, RatMatrix::identity(dim), RatMatrix::zeros(0, dim))
    }

    pub fn nonnegative_orthant(dim: usize) -> Self {
        PolyCone::new(dim, RatMatrix::zeros(0, dim), RatMatrix::identity(dim))
    }

    pub fn contains_point(&self, d: &[Rational]) -> bool {
        assert_eq!(d.len(), self.dim, "point dimension");
        self.eq.mul_vec(d).iter().all(Zero::is_zero)
            && self.ineq.mul_vec(d).iter().all(|v| !v.is_negative())
    }

    /// True when both `d` and `-d` lie in the cone.
    pub fn contains_line(&self, d: &[Rational]) -> bool {
        self.eq.mul_vec(d).iter().all(Zero::is_zero) && self.ineq.mul_vec(d).iter().all(Zero::is_zero)
    }

    pub fn contains_generators(&self, g: &Generators) -> bool {
        g.rays.iter().all(|r| self.contains_point(r)) && g.lineality.iter().all(|l| self.contains_line(l))
    }

    pub fn intersect(&self, other: &PolyCone) -> PolyCone {
        assert_eq!(self.dim, other.dim, "intersect: dimension mismatch");
        PolyCone::new(self.dim, self.eq.vstack(&other.eq), self.ineq.vstack(&other.ineq))
    }

    pub fn with_eq(&self, row: Vec<Rational>) -> PolyCone {
        let mut c = self.clone();
        c.eq.push_row(row);
        c
    }

    pub fn with_ineq(&self, row: Vec<Rational>) -> PolyCone {
        let mut c = self.clone();
        c.ineq.push_row(row);
        c
    }

    pub fn rows(&self) -> ConeRows {
        ConeRows {
            eq: self.eq.row_vecs(),
            ineq: self.ineq.row_vecs(),
        }
    }

    pub fn from_cone_rows(dim: usize, rows: &ConeRows) -> Result<PolyCone, String> {
        for r in rows.eq.iter().chain(&rows.ineq) {
            if r.len() != dim {
                return Err(format!("cone row has length {}, expected {dim}", r.len()));
            }
        }
        Ok(PolyCone::from_rows(dim, rows.eq.clone(), rows.ineq.clone()))
    }

    /// Applies `d ↦ M d` to the row space: returns `{e : M e ∈ self}` for `M` of shape `dim × k`.
    pub fn pullback(&self, m: &RatMatrix) -> PolyCone {
        assert_eq!(m.rows(), self.dim, "pullback: shape mismatch");
        PolyCone::new(m.cols(), self.eq.mul(m), self.ineq.mul(m))
    }

    /// Linear span of the cone; equals the whole space iff the cone is full-dimensional.
    pub fn dimension(&self) -> usize {
        let g = dd_hrep_to_vrep(self);
        let mut rows = g.rays.clone();
        rows.extend(g.lineality.iter().cloned());
        RatMatrix::from_rows(self.dim, rows).rank()
    }
}

impl fmt::Display for PolyCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 0..self.eq.rows() {
            parts.push(format!("{}·d = 0", format_vec(self.eq.row(i))));
        }
        for i in 0..self.ineq.rows() {
            parts.push(format!("{}·d ≥ 0", format_vec(self.ineq.row(i))));
        }
        if parts.is_empty() {
            write!(f, "R^{}", self.dim)
        } else {
            write!(f, "{{{}}}", parts.join(", "))
        }
    }
}

/// Canonical basis of a subspace: reduced echelon rows scaled to primitive integers.
pub fn canonical_basis(dim: usize, vs: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    RatMatrix::from_rows(dim, vs.to_vec())
        .row_space_basis()
        .iter()
        .map(|v| primitive(v))
        .collect()
}

/// Generators of `c`: extreme rays of its pointed part plus a lineality basis.
pub fn dd_hrep_to_vrep(c: &PolyCone) -> Generators {
    let dim = c.dim;
    // Parametrise the equality subspace: d = N p.
    let n_basis: Vec<Vec<Rational>> = if c.eq.rows() == 0 {
        (0..dim).map(|i| unit(dim, i)).collect()
    } else {
        c.eq.nullspace()
    };
    let k = n_basis.len();
    let n_mat = RatMatrix::from_rows(dim, n_basis).transpose(); // dim × k
    let a = c.ineq.mul(&n_mat); // m × k
    let lin_p = if a.rows() == 0 {
        (0..k).map(|i| unit(k, i)).collect()
    } else {
        a.nullspace()
    };
    let lineality: Vec<Vec<Rational>> = lin_p.iter().map(|v| n_mat.mul_vec(v)).collect();
    let lineality = canonical_basis(dim, &lineality);

    // Restrict to the row space of A, where the cone is pointed: p = Rᵀ e.
    let r_rows = a.row_space_basis();
    let mut rays = Vec::new();
    if !r_rows.is_empty() {
        let rt = RatMatrix::from_rows(k, r_rows).transpose(); // k × r
        let b = a.mul(&rt); // m × r, full column rank
        for e in pointed_dd(&b) {
            let d = n_mat.mul_vec(&rt.mul_vec(&e));
            rays.push(primitive(&d));
        }
    }
    rays.sort();
    rays.dedup();
    Generators {
        dim,
        rays,
        lineality,
    }
}

/// H-representation of the conic hull of `g`, via the generators of its dual.
pub fn dd_vrep_to_hrep(g: &Generators) -> PolyCone {
    let dim = g.dim;
    let dual = PolyCone::from_rows(dim, g.lineality.clone(), g.rays.clone());
    let dg = dd_hrep_to_vrep(&dual);
    PolyCone::from_rows(dim, dg.lineality, dg.rays)
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

struct Ray {
    v: Vec<Rational>,
    /// Processed row indices at which the ray is tight, kept sorted.
    zeros: Vec<usize>,
}

/// Extreme rays of `{e : B e ≥ 0}` for `B` with full column rank.
fn pointed_dd(b: &RatMatrix) -> Vec<Vec<Rational>> {
    let (m, r) = (b.rows(), b.cols());
    // Initial basis: greedily pick r independent rows.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut trial = chosen.clone();
        trial.push(i);
        if b.select_rows(&trial).rank() == trial.len() {
            chosen = trial;
            if chosen.len() == r {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), r, "pointed_dd requires full column rank");
    let inv = b.select_rows(&chosen).inverse().expect("independent rows");
    let mut processed = chosen.clone();
    let mut rays: Vec<Ray> = (0..r)
        .map(|j| {
            let v = primitive(&inv.col(j));
            Ray {
                zeros: tight_rows(b, &processed, &v),
                v,
            }
        })
        .collect();

    for i in (0..m).filter(|i| !chosen.contains(i)) {
        let row = b.row(i);
        let vals: Vec<Rational> = rays.iter().map(|ray| dot(row, &ray.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        for &p in &pos {
            for &q in &neg {
                if adjacent(b, &rays, p, q, r) {
                    let v: Vec<Rational> = rays[q]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                        .collect();
                    next.push(Ray { v: primitive(&v), zeros: Vec::new() });
                }
            }
        }
        let mut kept: Vec<Ray> = rays
            .into_iter()
            .zip(&vals)
            .filter(|(_, val)| !val.is_negative())
            .map(|(ray, _)| ray)
            .collect();
        kept.extend(next);
        processed.push(i);
        processed.sort_unstable();
        for ray in kept.iter_mut() {
            ray.zeros = tight_rows(b, &processed, &ray.v);
        }
        rays = kept;
    }
    let mut out: Vec<Vec<Rational>> = rays.into_iter().map(|r| r.v).filter(|v| !is_zero_vec(v)).collect();
    out.sort();
    out.dedup();
    out
}

fn tight_rows(b: &RatMatrix, processed: &[usize], v: &[Rational]) -> Vec<usize> {
    let mut z: Vec<usize> = processed.iter().copied().filter(|&i| dot(b.row(i), v).is_zero()).collect();
    z.sort_unstable();
    z
}

fn adjacent(b: &RatMatrix, rays: &[Ray], p: usize, q: usize, r: usize) -> bool {
    let common: Vec<usize> = rays[p]
        .zeros
        .iter()
        .copied()
        .filter(|i| rays[q].zeros.binary_search(i).is_ok())
        .collect();
    if r < 2 {
        return true;
    }
    if common.len() < r - 2 {
        return false;
    }
    // Combinatorial test: no third ray is tight on all common rows.
    let dominated = rays.iter().enumerate().any(|(j, other)| {
        j != p && j != q && common.iter().all(|i| other.zeros.binary_search(i).is_ok())
    });
    if dominated {
        return false;
    }
    b.select_rows(&common).rank() == r - 2
}
