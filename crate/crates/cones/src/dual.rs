use crate::formulation::UnionCone;
use ratmath::{dd_vrep_to_hrep, Generators, PolyCone};

/// `{Eᵀy + Iᵀλ : λ ≥ 0}` in H-form.
pub fn dual_cone(c: &PolyCone) -> PolyCone {
    dd_vrep_to_hrep(&Generators {
        dim: c.dim,
        rays: c.ineq.row_vecs(),
        lineality: c.eq.row_vecs(),
    })
}

/// Dual of a union: the intersection of the member duals. An empty union has the whole space as dual.
pub fn dual_union(u: &UnionCone) -> PolyCone {
    u.members
        .iter()
        .map(|m| dual_cone(&m.cone))
        .fold(PolyCone::full(u.dim), |acc, d| acc.intersect(&d))
}
