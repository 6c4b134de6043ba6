mod common;

use anf_core::{eval, SignatureVector};
use common::*;
use cones::*;
use proptest::prelude::*;
use ratmath::{dd_hrep_to_vrep, rat, rvec, PolyCone, RatMatrix, Rational};
use transforms::{anf_branches, mpcc_branches, phi_inv, psi, psi_inv, to_mpcc, to_slack, lift_point, MpccPoint, DEFAULT_BRANCH_CAP};

fn cone(dim: usize, eq: &[&[i64]], ineq: &[&[i64]]) -> PolyCone {
    PolyCone::new(dim, RatMatrix::from_i64(dim, eq), RatMatrix::from_i64(dim, ineq))
}

#[test]
fn e1_positive_branch_cone() {
    let p = e1();
    let e = eval(&p, &rvec(&[0, 0])).unwrap();
    let bs = anf_branches(&p, &e, DEFAULT_BRANCH_CAP).unwrap();
    let lin = lin_cone_branch(&bs[0]);
    let expect = cone(3, &[&[0, 1, -1], &[-1, 0, 1]], &[&[0, 0, 1]]);
    assert!(cone_equal(&lin, &expect));
    let (t, cert) = tangent_cone_branch(&bs[0]);
    assert_eq!(cert.status, TangentStatus::Affine);
    assert_eq!(t, Some(lin));
}

#[test]
fn unconstrained_branch_is_full_space() {
    let p = program(2, 0, &[("t1", 1)], &[], &[], &[]);
    let e = eval(&p, &rvec(&[1, 1])).unwrap();
    let bs = anf_branches(&p, &e, DEFAULT_BRANCH_CAP).unwrap();
    assert!(cone_equal(&lin_cone_branch(&bs[0]), &PolyCone::full(2)));
}

#[test]
fn e3_branches() {
    let p = e3();
    let e = eval(&p, &rvec(&[0, 0])).unwrap();
    for (b, sg) in anf_branches(&p, &e, DEFAULT_BRANCH_CAP).unwrap().iter().zip([1, -1]) {
        let expect = cone(3, &[&[1, 0, -1]], &[&[0, 0, sg]]);
        assert!(cone_equal(&lin_cone_branch(b), &expect));
        let (t, cert) = tangent_cone_branch(b);
        assert!(t.is_none());
        assert_eq!(cert.status, TangentStatus::Unknown);
        assert!(cert.rank < cert.active);
    }
}

#[test]
fn licq_and_mfcq_certificates() {
    let p = program(2, 0, &[], &[], &[&[("1", 1), ("t1^2", -1), ("t2^2", -1)]], &[]);
    let e = eval(&p, &rvec(&[1, 0])).unwrap();
    let b = &anf_branches(&p, &e, DEFAULT_BRANCH_CAP).unwrap()[0];
    assert_eq!(tangent_cone_branch(b).1.status, TangentStatus::BranchLICQ);

    let p = program(2, 0, &[], &[], &[&[("t2", 1), ("t1^2", -1)], &[("t2", 2), ("t1^2", -1)]], &[]);
    let e = eval(&p, &rvec(&[0, 0])).unwrap();
    let b = &anf_branches(&p, &e, DEFAULT_BRANCH_CAP).unwrap()[0];
    let (t, cert) = tangent_cone_branch(b);
    assert_eq!(cert.status, TangentStatus::BranchMFCQ);
    assert!(cone_equal(&t.unwrap(), &cone(2, &[], &[&[0, 1]])));
}

#[test]
fn e1_abs_linearized_cone() {
    let p = e1();
    let e = eval(&p, &rvec(&[0, 0])).unwrap();
    let u = lin_cone_abs(&p, &e).unwrap();
    assert_eq!(u.members.len(), 2);
    // δz̃ = δt₁ and δt₂ = |δt₁|.
    let expect = [cone(3, &[&[1, -1, 0], &[1, 0, -1]], &[&[1, 0, 0]]), cone(3, &[&[1, 1, 0], &[1, 0, -1]], &[&[-1, 0, 0]])];
    for (m, x) in u.members.iter().zip(&expect) {
        assert!(cone_equal(&m.cone, x));
    }
    let diag = cone(3, &[&[1, -1, 0], &[1, 0, -1]], &[&[1, 0, 0]]);
    assert!(union_covers(&u.cones(), &diag, DEFAULT_DEPTH_CAP).is_covered());
    let e22 = eval(&p, &rvec(&[2, 2])).unwrap();
    assert_eq!(lin_cone_abs(&p, &e22).unwrap().members.len(), 1);
}

#[test]
fn e3_abs_linearized_cone_projects_onto_plane() {
    let p = e3();
    let e = eval(&p, &rvec(&[0, 0])).unwrap();
    let u = lin_cone_abs(&p, &e).unwrap();
    let m = RatMatrix::from_i64(2, &[&[1, 0], &[0, 1], &[1, 0]]);
    let projected: Vec<PolyCone> = u.cones().iter().map(|c| c.pullback(&m)).collect();
    assert!(union_covers(&projected, &PolyCone::full(2), DEFAULT_DEPTH_CAP).is_covered());
    assert!(!cone_equal(&projected[0], &PolyCone::full(2)));
}

#[test]
fn complementarity_cone_pieces() {
    let deg = MpccPoint { x: vec![], u: rvec(&[0]), v: rvec(&[0]) };
    let u = compl_cone(&deg).unwrap();
    assert_eq!(u.members.len(), 2);
    assert!(cone_equal(&u.members[0].cone, &cone(2, &[&[0, 1]], &[&[1, 0]])));
    assert!(cone_equal(&u.members[1].cone, &cone(2, &[&[1, 0]], &[&[0, 1]])));

    let up = MpccPoint { x: vec![], u: rvec(&[2]), v: rvec(&[0]) };
    let u = compl_cone(&up).unwrap();
    assert_eq!(u.members.len(), 1);
    assert!(cone_equal(&u.members[0].cone, &cone(2, &[&[0, 1]], &[])));
}

#[test]
fn dual_examples() {
    assert!(cone_equal(&dual_cone(&PolyCone::full(2)), &PolyCone::zero(2)));
    assert!(cone_equal(&dual_cone(&PolyCone::nonnegative_orthant(3)), &PolyCone::nonnegative_orthant(3)));
    let l = union(&[cone(2, &[&[0, 1]], &[&[1, 0]]), cone(2, &[&[1, 0]], &[&[0, 1]])]);
    assert!(cone_equal(&dual_union(&l), &PolyCone::nonnegative_orthant(2)));
}

fn union(cs: &[PolyCone]) -> UnionCone {
    UnionCone {
        dim: cs[0].dim,
        members: cs
            .iter()
            .map(|c| LabeledCone { label: transforms::BranchSpec::Signature(SignatureVector(vec![])), cone: c.clone() })
            .collect(),
    }
}

#[test]
fn cover_examples() {
    let c = cone(3, &[&[1, 2, 3]], &[&[1, 0, 0]]);
    assert!(union_covers(&[c.clone()], &c, DEFAULT_DEPTH_CAP).is_covered());
    let l = [cone(2, &[&[0, 1]], &[&[1, 0]]), cone(2, &[&[1, 0]], &[&[0, 1]])];
    match union_covers(&l, &PolyCone::nonnegative_orthant(2), DEFAULT_DEPTH_CAP) {
        CoverResult::NotCovered(w) => assert_eq!(w, rvec(&[1, 1])),
        other => panic!("{other:?}"),
    }
    assert_eq!(union_covers(&l, &PolyCone::nonnegative_orthant(2), 0), CoverResult::Unknown);
    // Two half-planes cover the plane; a third member is not needed.
    let halves = [cone(2, &[], &[&[1, 0]]), cone(2, &[], &[&[-1, 0]])];
    assert!(union_covers(&halves, &PolyCone::full(2), DEFAULT_DEPTH_CAP).is_covered());
    assert!(matches!(union_covers(&[], &PolyCone::zero(2), 4), CoverResult::NotCovered(_)));
}

#[test]
fn mpcc_linearized_cone_of_e2() {
    let p = e2();
    let e = eval(&p, &rvec(&[0, 0])).unwrap();
    let pt = phi_inv(&e.t, &e.z);
    let u = lin_cone_mpcc(&p, &pt).unwrap();
    assert_eq!(u.members.len(), 2);
    let mp = to_mpcc(&p);
    let bs = mpcc_branches(&mp, &pt, DEFAULT_BRANCH_CAP).unwrap();
    let branch: Vec<PolyCone> = bs.iter().map(lin_cone_branch).collect();
    assert_eq!(unions_equal(&u.cones(), &branch, DEFAULT_DEPTH_CAP), Some(true));
    let bad = MpccPoint { x: rvec(&[0, 0]), u: rvec(&[1]), v: rvec(&[0]) };
    assert!(lin_cone_mpcc(&p, &bad).is_err());
}

#[test]
fn e_form_of_e2_has_eight_pieces() {
    let p = e2();
    let e = eval(&p, &rvec(&[0, 0])).unwrap();
    let sp = to_slack(&p);
    let el = eval(&sp.lifted, &lift_point(&e, &[])).unwrap();
    let u = lin_cone_abs(&sp.lifted, &el).unwrap();
    assert_eq!(u.members.len(), 8);
    let bs = anf_branches(&sp.lifted, &el, DEFAULT_BRANCH_CAP).unwrap();
    let branch: Vec<PolyCone> = bs.iter().map(lin_cone_branch).collect();
    assert_eq!(unions_equal(&u.cones(), &branch, DEFAULT_DEPTH_CAP), Some(true));
}

fn small_cone() -> impl Strategy<Value = PolyCone> {
    (1usize..=4, 0usize..=1, 0usize..=5).prop_flat_map(|(d, me, mi)| {
        (prop::collection::vec(prop::collection::vec(-2i64..=2, d), me), prop::collection::vec(prop::collection::vec(-2i64..=2, d), mi))
            .prop_map(move |(e, i)| {
                let conv = |rs: Vec<Vec<i64>>| rs.into_iter().map(|r| r.into_iter().map(rat).collect()).collect();
                PolyCone::from_rows(d, conv(e), conv(i))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn biduality(c in small_cone()) {
        let dd = dual_cone(&dual_cone(&c));
        prop_assert!(cone_equal(&c, &dd));
    }

    #[test]
    fn dual_union_is_inside_every_member_dual(cs in prop::collection::vec(small_cone(), 1..4)) {
        let dim = cs[0].dim;
        let cs: Vec<PolyCone> = cs.into_iter().filter(|c| c.dim == dim).collect();
        let u = union(&cs);
        let d = dual_union(&u);
        for c in &cs {
            prop_assert!(cone_contains(&dual_cone(c), &d));
        }
    }

    #[test]
    fn cover_witness_is_sound(cs in prop::collection::vec(small_cone(), 1..4), c in small_cone()) {
        let cs: Vec<PolyCone> = cs.into_iter().filter(|m| m.dim == c.dim).collect();
        prop_assume!(!cs.is_empty());
        match union_covers(&cs, &c, DEFAULT_DEPTH_CAP) {
            CoverResult::NotCovered(w) => {
                prop_assert!(c.contains_point(&w));
                prop_assert!(cs.iter().all(|m| !m.contains_point(&w)));
            }
            CoverResult::Covered => {
                // Every generator and every pairwise sum of generators of c lies in the union.
                let g = dd_hrep_to_vrep(&c);
                let mut pts: Vec<Vec<Rational>> = g.rays.clone();
                for l in &g.lineality {
                    pts.push(l.clone());
                    pts.push(ratmath::neg_vec(l));
                }
                let base = pts.clone();
                for a in &base {
                    for b in &base {
                        pts.push(ratmath::add_vec(a, b));
                    }
                }
                for x in pts {
                    prop_assert!(cs.iter().any(|m| m.contains_point(&x)));
                }
            }
            CoverResult::Unknown => prop_assert!(false, "depth cap hit"),
        }
    }

    #[test]
    fn decomposition_on_random_programs((p, t) in feasible_instance(false)) {
        let e = eval(&p, &t).unwrap();
        let abs = lin_cone_abs(&p, &e).unwrap();
        let bs = anf_branches(&p, &e, DEFAULT_BRANCH_CAP).unwrap();
        prop_assert_eq!(abs.members.len(), bs.len());
        let branch: Vec<PolyCone> = bs.iter().map(lin_cone_branch).collect();
        prop_assert_eq!(unions_equal(&abs.cones(), &branch, DEFAULT_DEPTH_CAP), Some(true));
        let pt = phi_inv(&e.t, &e.z);
        let mp = to_mpcc(&p);
        let mpcc = lin_cone_mpcc(&p, &pt).unwrap();
        let mbs = mpcc_branches(&mp, &pt, DEFAULT_BRANCH_CAP).unwrap();
        let mbranch: Vec<PolyCone> = mbs.iter().map(lin_cone_branch).collect();
        prop_assert_eq!(unions_equal(&mpcc.cones(), &mbranch, DEFAULT_DEPTH_CAP), Some(true));
    }

    #[test]
    fn psi_transports_branch_generators((p, t) in feasible_instance(false)) {
        let e = eval(&p, &t).unwrap();
        let pt = phi_inv(&e.t, &e.z);
        let mp = to_mpcc(&p);
        let anf = anf_branches(&p, &e, DEFAULT_BRANCH_CAP).unwrap();
        let mpcc = mpcc_branches(&mp, &pt, DEFAULT_BRANCH_CAP).unwrap();
        for (a, m) in anf.iter().zip(&mpcc) {
            let ca = lin_cone_branch(a);
            let cm = lin_cone_branch(m);
            let gm = dd_hrep_to_vrep(&cm);
            for r in &gm.rays {
                prop_assert!(ca.contains_point(&psi(p.n_t, p.s, r)));
            }
            for l in &gm.lineality {
                prop_assert!(ca.contains_line(&psi(p.n_t, p.s, l)));
            }
            let ga = dd_hrep_to_vrep(&ca);
            for r in &ga.rays {
                let back = psi_inv(p.n_t, r, &pt);
                prop_assert!(cm.contains_point(&back));
                prop_assert_eq!(psi(p.n_t, p.s, &back), r.clone());
            }
            for l in &ga.lineality {
                prop_assert!(cm.contains_line(&psi_inv(p.n_t, l, &pt)));
            }
        }
    }
}
