use proptest::prelude::*;
use ratmath::{
    dd_hrep_to_vrep, dd_vrep_to_hrep, dot, lp_solve, rat, validate, LpOutcome, LpProblem, PolyCone, RatMatrix,
    Rational,
};
use std::collections::BTreeSet;

fn small_int() -> impl Strategy<Value = i64> {
    -3i64..=3
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(prop::collection::vec(small_int(), cols), rows).prop_map(move |rs| {
        RatMatrix::from_rows(cols, rs.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    })
}

fn any_matrix() -> impl Strategy<Value = RatMatrix> {
    (0usize..6, 0usize..6).prop_flat_map(|(r, c)| matrix(r, c))
}

#[derive(Debug, Clone)]
struct RandomLp {
    p: LpProblem,
}

fn lp_strategy() -> impl Strategy<Value = RandomLp> {
    (1usize..5, 0usize..3, 0usize..6, any::<bool>(), 0u8..3).prop_flat_map(|(n, me, mi, with_strict, obj)| {
        (
            matrix(me, n),
            prop::collection::vec(small_int(), me),
            matrix(mi, n),
            prop::collection::vec(small_int(), mi),
            prop::collection::vec(small_int(), n),
            prop::collection::vec(any::<bool>(), mi),
        )
            .prop_map(move |(a, b, g, h, c, strict_mask)| {
                let mut p = LpProblem::new(n);
                p.eq = a;
                p.eq_rhs = b.into_iter().map(rat).collect();
                p.ineq = g;
                p.ineq_rhs = h.into_iter().map(rat).collect();
                if with_strict {
                    p.strict = strict_mask
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| **s)
                        .map(|(i, _)| i)
                        .collect::<BTreeSet<_>>();
                }
                if p.strict.is_empty() {
                    let c: Vec<Rational> = c.into_iter().map(rat).collect();
                    p = match obj {
                        0 => p,
                        1 => p.minimize(c),
                        _ => p.maximize(c),
                    };
                }
                RandomLp { p }
            })
    })
}

/// Brute force: each vertex of the boxed region is the unique solution of some set of tight rows.
fn vertex_oracle(p: &LpProblem) -> Option<Vec<Vec<Rational>>> {
    let n = p.n;
    let rows: Vec<(Vec<Rational>, Rational)> = (0..p.ineq.rows())
        .map(|i| (p.ineq.row(i).to_vec(), p.ineq_rhs[i].clone()))
        .collect();
    let mut vertices = Vec::new();
    let k = rows.len();
    let mut pick = vec![0usize; 0];
    fn rec(
        start: usize,
        need: usize,
        k: usize,
        pick: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(pick.clone());
        if pick.len() == need {
            return;
        }
        for i in start..k {
            pick.push(i);
            rec(i + 1, need, k, pick, out);
            pick.pop();
        }
    }
    let mut subsets = Vec::new();
    rec(0, n, k, &mut pick, &mut subsets);
    for s in subsets {
        let mut m = p.eq.clone();
        let mut rhs = p.eq_rhs.clone();
        for &i in &s {
            m.push_row(rows[i].0.clone());
            rhs.push(rows[i].1.clone());
        }
        if m.rank() < n {
            continue;
        }
        if let Some(x) = m.solve(&rhs) {
            if m.mul_vec(&x) == rhs && p.is_feasible_point(&x) {
                vertices.push(x);
            }
        }
    }
    Some(vertices)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn every_certificate_revalidates(lp in lp_strategy()) {
        let out = lp_solve(&lp.p).unwrap();
        prop_assert!(validate(&lp.p, &out).is_ok(), "{:?}", validate(&lp.p, &out));
    }

    #[test]
    fn farkas_exclusivity(lp in lp_strategy()) {
        // Close the region with a box so the vertex oracle is complete.
        let mut p = lp.p.clone();
        p.objective = None;
        p.strict.clear();
        for j in 0..p.n {
            let mut e = vec![rat(0); p.n];
            e[j] = rat(1);
            p.add_le(e.clone(), rat(10));
            p.add_ge(e, rat(-10));
        }
        let out = lp_solve(&p).unwrap();
        let vertices = vertex_oracle(&p).unwrap();
        prop_assert_eq!(out.is_infeasible(), vertices.is_empty());
    }

    #[test]
    fn optimum_matches_vertex_enumeration(lp in lp_strategy(), c in prop::collection::vec(-3i64..=3, 4)) {
        let mut p = lp.p.clone();
        p.strict.clear();
        for j in 0..p.n {
            let mut e = vec![rat(0); p.n];
            e[j] = rat(1);
            p.add_le(e.clone(), rat(10));
            p.add_ge(e, rat(-10));
        }
        let c: Vec<Rational> = c.into_iter().take(p.n).map(rat).collect();
        let p = p.minimize(c.clone());
        let out = lp_solve(&p).unwrap();
        let vertices = vertex_oracle(&p).unwrap();
        match out {
            LpOutcome::Optimal { value, .. } => {
                let best = vertices.iter().map(|x| dot(&c, x)).min().unwrap();
                prop_assert_eq!(value, best);
            }
            LpOutcome::Feasible { .. } => prop_assert!(c.iter().all(|v| *v == rat(0))),
            LpOutcome::Infeasible { .. } => prop_assert!(vertices.is_empty()),
            LpOutcome::Unbounded { .. } => prop_assert!(false, "boxed problem reported unbounded"),
        }
    }

    #[test]
    fn rank_is_transpose_invariant(m in any_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank(), m.rref().1.len());
    }

    #[test]
    fn double_description_round_trip(
        (dim, eq, ineq) in (1usize..=6).prop_flat_map(|d| (Just(d), matrix(0, d).boxed().prop_union(matrix(1, d).boxed()), (0usize..=9).prop_flat_map(move |m| matrix(m, d))))
    ) {
        let c = PolyCone::new(dim, eq, ineq);
        let g = dd_hrep_to_vrep(&c);
        prop_assert!(c.contains_generators(&g));
        let back = dd_vrep_to_hrep(&g);
        let g2 = dd_hrep_to_vrep(&back);
        prop_assert!(c.contains_generators(&g2));
        prop_assert!(back.contains_generators(&g));
        // Every extreme ray is tight on dim - lineality - 1 independent rows.
        for r in &g.rays {
            let tight: Vec<usize> = (0..c.ineq.rows()).filter(|&i| dot(c.ineq.row(i), r) == rat(0)).collect();
            let stacked = c.eq.vstack(&c.ineq.select_rows(&tight));
            prop_assert_eq!(stacked.rank(), dim - g.lineality.len() - 1);
        }
    }
}
