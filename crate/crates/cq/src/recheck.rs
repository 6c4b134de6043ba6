use crate::decide::{CqVerdict, Evidence, Status};
use crate::formulation::FormulationData;
use cones::{cone_contains, dual_cone, union_covers_union, DEFAULT_DEPTH_CAP};
use num_traits::Zero;
use ratmath::{dd_hrep_to_vrep, dot, PolyCone, Rational};

fn in_dual(w: &[Rational], c: &PolyCone) -> bool {
    let g = dd_hrep_to_vrep(c);
    g.rays.iter().all(|r| dot(w, r) >= Rational::zero()) && g.lineality.iter().all(|l| dot(w, l).is_zero())
}

/// Re-validates the evidence of a verdict against the formulation data it was computed from.
pub fn recheck_verdict(f: &FormulationData, v: &CqVerdict) -> Result<(), String> {
    for b in &f.branches {
        for c in b.tangent.iter().flatten() {
            if !cone_contains(&b.lin, c) {
                return Err(format!("{}: tangent piece outside the linearized cone", b.label));
            }
        }
    }
    // Tangent pieces `K` and the linearized cones `U` of undecided branches.
    let (known, unknown, lin): (Vec<PolyCone>, Vec<PolyCone>, Vec<PolyCone>) = match &v.label {
        Some(l) => {
            let b = f.branch(l).ok_or_else(|| format!("unknown branch {l}"))?;
            (b.tangent.clone().unwrap_or_default(), Vec::new(), vec![b.lin.clone()])
        }
        None => (
            f.branches.iter().filter_map(|b| b.tangent.clone()).flatten().collect(),
            f.branches.iter().filter(|b| b.tangent.is_none()).map(|b| b.lin.clone()).collect(),
            f.lin_union.cones(),
        ),
    };
    let ok = |cond: bool, msg: &str| if cond { Ok(()) } else { Err(msg.to_string()) };
    match (&v.status, &v.evidence) {
        (Status::Fails, Evidence::Witness { direction }) => {
            ok(lin.iter().any(|c| c.contains_point(direction)), "witness is not a linearized direction")?;
            ok(
                !known.iter().chain(&unknown).any(|c| c.contains_point(direction)),
                "witness lies in a possible tangent piece",
            )
        }
        (Status::Fails, Evidence::DualWitness { w, direction }) => {
            ok(lin.iter().any(|c| c.contains_point(direction)), "dual witness direction is not linearized")?;
            ok(dot(w, direction) < Rational::zero(), "dual witness does not separate")?;
            ok(known.iter().chain(&unknown).all(|c| in_dual(w, c)), "dual witness is not in the tangent dual")
        }
        (Status::Holds, Evidence::TangentCovers { .. }) => {
            ok(
                union_covers_union(&known, &lin, DEFAULT_DEPTH_CAP).is_covered(),
                "tangent pieces do not cover the linearized cone",
            )
        }
        (Status::Holds, Evidence::DualContained { .. }) => {
            let lin_dual = lin.iter().map(dual_cone).fold(PolyCone::full(f.dim_of(&v.label)), |a, d| a.intersect(&d));
            let k_dual = known.iter().map(dual_cone).fold(PolyCone::full(f.dim_of(&v.label)), |a, d| a.intersect(&d));
            ok(cone_contains(&lin_dual, &k_dual), "tangent dual is not inside the linearized dual")
        }
        (Status::Unknown, Evidence::Blocked { branches, .. }) => {
            ok(branches.iter().all(|l| f.branch(l).is_some()), "blocked evidence names an unknown branch")
        }
        _ => Err("evidence does not match status".into()),
    }
}
