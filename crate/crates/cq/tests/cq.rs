mod common;

use common::*;
use cq::{
    check_akq, check_formulation_cq, check_gkq, check_mpcc_cq, recheck_verdict, verify_relations, CqError, Evidence, PointAnalysis,
    Status, TangentAnnotations, TangentSource, Which,
};
use num_traits::Zero;
use proptest::prelude::*;
use ratmath::{dot, rvec, Rational};

fn origin() -> Vec<Rational> {
    rvec(&[0, 0])
}

fn statuses(a: &PointAnalysis) -> Vec<(Status, Status)> {
    a.formulations()
        .iter()
        .map(|f| (check_formulation_cq(f, Which::Acq).status, check_formulation_cq(f, Which::Gcq).status))
        .collect()
}

#[test]
fn e1_and_e2_hold_everywhere() {
    for p in [e1(), e2()] {
        let a = PointAnalysis::new(&p, &origin(), &TangentAnnotations::none(), &vec![false; p.m2()]).unwrap();
        assert!(statuses(&a).iter().all(|s| *s == (Status::Holds, Status::Holds)));
        let r = verify_relations(&a);
        assert!(r.consistent);
        assert!(r.verdicts.iter().all(|v| v.status == Status::Holds));
    }
}

#[test]
fn e2_slack_mpcc_has_eight_branches() {
    let p = e2();
    let a = PointAnalysis::new(&p, &origin(), &TangentAnnotations::none(), &[false, false]).unwrap();
    assert_eq!(a.inlp.branches.len(), 2);
    assert_eq!(a.enlp.branches.len(), 8);
    assert_eq!(a.empcc.branches.len(), 8);
}

#[test]
fn e3_without_annotations_is_undecided() {
    let p = e3();
    let ann = TangentAnnotations::none();
    let v = check_akq(&p, &origin(), &ann).unwrap();
    assert_eq!(v.status, Status::Unknown);
    assert!(matches!(v.evidence, Evidence::Blocked { ref branches, .. } if branches.len() == 2));
}

#[test]
fn e3_fails_with_witnesses() {
    let p = e3();
    let ann = e3_annotations();
    let akq = check_akq(&p, &origin(), &ann).unwrap();
    assert_eq!(akq.status, Status::Fails);
    let Evidence::Witness { direction } = &akq.evidence else { panic!("{akq:?}") };
    assert_eq!(direction, &rvec(&[1, 0, 1]));
    let gkq = check_gkq(&p, &origin(), &ann).unwrap();
    assert_eq!(gkq.status, Status::Fails);
    let Evidence::DualWitness { w, direction } = &gkq.evidence else { panic!("{gkq:?}") };
    // Tangent cone is the δt₂-axis; linearized union is the plane δz̃ = δt₁.
    assert!(w[1].is_zero());
    assert!(direction[2] == direction[0]);
    assert!(dot(w, direction) < Rational::zero());
    let a = PointAnalysis::new(&p, &origin(), &ann, &[]).unwrap();
    for v in verify_relations(&a).verdicts {
        let f = a.formulations().into_iter().find(|f| f.formulation == v.formulation).unwrap();
        assert_eq!(recheck_verdict(f, &v), Ok(()));
    }
    let mut forged = akq.clone();
    forged.evidence = Evidence::Witness { direction: rvec(&[0, 1, 0]) };
    assert!(recheck_verdict(&a.inlp, &forged).is_err());
    for which in [Which::Acq, Which::Gcq] {
        assert_eq!(check_mpcc_cq(&p, &origin(), &ann, which).unwrap().status, Status::Fails);
    }
}

#[test]
fn e4_akq_fails_gkq_holds() {
    let p = e4();
    let ann = e4_annotations();
    let a = PointAnalysis::new(&p, &origin(), &ann, &[]).unwrap();
    let st = statuses(&a);
    assert_eq!(st[0], (Status::Fails, Status::Holds));
    assert_eq!(st[1], (Status::Fails, Status::Holds));
    assert!(a.impcc.branches.iter().all(|b| matches!(b.source, TangentSource::Transported { .. })));
    let r = verify_relations(&a);
    assert!(r.consistent);
    assert!(r.converse.iter().any(|c| c.arrow == "MPCC-GCQ[I-MPCC] => GKQ[I-NLP]"));
}

/// Over `(δt₁, δt₂, δu, δv)` the MPCC tangent cone is spanned by `(±1, ±1, [±1]⁺, [±1]⁻)`, and the
/// linearized cone leaves `δt₂` free, so `δt₂`-components of dual vectors must vanish.
#[test]
fn e4_counterpart_loses_guignard() {
    let v = check_mpcc_cq(&e4(), &origin(), &e4_annotations(), Which::Gcq).unwrap();
    assert_eq!(v.status, Status::Fails);
    let Evidence::DualWitness { w, direction } = &v.evidence else { panic!("{v:?}") };
    for r in [[1, 1, 1, 0], [1, -1, 1, 0], [-1, 1, 0, 1], [-1, -1, 0, 1]] {
        assert!(dot(w, &rvec(&r)) >= Rational::zero());
    }
    let d = direction;
    let zero = Rational::zero();
    assert_eq!(d[0], &d[2] - &d[3]);
    assert!(d[2] >= zero && d[3] >= zero && (d[2].is_zero() || d[3].is_zero()));
    assert!(dot(w, d) < zero);
    assert_eq!(check_mpcc_cq(&e4(), &origin(), &e4_annotations(), Which::Acq).unwrap().status, Status::Fails);
}

#[test]
fn e5_both_fail() {
    let p = e5();
    let ann = e5_annotations();
    let a = PointAnalysis::new(&p, &origin(), &ann, &[]).unwrap();
    assert!(statuses(&a).iter().all(|s| *s == (Status::Fails, Status::Fails)), "{:?}", statuses(&a));
    assert!(verify_relations(&a).consistent);
}

#[test]
fn annotation_outside_linearized_cone_is_rejected() {
    let mut ann = TangentAnnotations::none();
    ann.pieces.insert(anf_core::SignatureVector(vec![1]), vec![cone(&[], &[])]);
    assert!(matches!(check_akq(&e3(), &origin(), &ann), Err(CqError::Annotation { .. })));
}

#[test]
fn infeasible_point_is_an_error() {
    assert!(matches!(check_akq(&e1(), &rvec(&[1, 0]), &TangentAnnotations::none()), Err(CqError::Infeasible)));
}

#[test]
fn slack_sign_choice_does_not_matter() {
    let p = e2();
    let t = rvec(&[1, 0]);
    let ann = TangentAnnotations::none();
    let a = PointAnalysis::new(&p, &t, &ann, &[false, false]).unwrap();
    let b = PointAnalysis::new(&p, &t, &ann, &[true, false]).unwrap();
    assert_ne!(a.enlp.anchor, b.enlp.anchor);
    assert_eq!(statuses(&a), statuses(&b));
}

#[test]
fn annotations_only_resolve_unknowns() {
    for (p, ann) in [(e3(), e3_annotations()), (e4(), e4_annotations()), (e5(), e5_annotations())] {
        let bare = PointAnalysis::new(&p, &origin(), &TangentAnnotations::none(), &[]).unwrap();
        let full = PointAnalysis::new(&p, &origin(), &ann, &[]).unwrap();
        for (x, y) in statuses(&bare).into_iter().zip(statuses(&full)) {
            for (s, t) in [(x.0, y.0), (x.1, y.1)] {
                assert!(s == Status::Unknown || s == t);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn affine_programs_satisfy_every_condition((p, t) in feasible_instance(true)) {
        let a = PointAnalysis::new(&p, &t, &TangentAnnotations::none(), &vec![false; p.m2()]).unwrap();
        let r = verify_relations(&a);
        prop_assert!(r.verdicts.iter().all(|v| v.status == Status::Holds));
        prop_assert!(r.consistent);
    }

    #[test]
    fn relations_are_consistent((p, t) in feasible_instance(false), flip in any::<bool>()) {
        let a = PointAnalysis::new(&p, &t, &TangentAnnotations::none(), &vec![flip; p.m2()]).unwrap();
        let r = verify_relations(&a);
        prop_assert!(r.consistent, "{:?}", r.arrows.iter().filter(|a| !a.consistent).collect::<Vec<_>>());
        for v in &r.verdicts {
            let f = a.formulations().into_iter().find(|f| f.formulation == v.formulation).unwrap();
            prop_assert_eq!(recheck_verdict(f, v), Ok(()));
            match &v.evidence {
                Evidence::Witness { direction } => {
                    let f = a.formulations().into_iter().find(|f| f.formulation == v.formulation).unwrap();
                    match &v.label {
                        Some(l) => prop_assert!(f.branch(l).unwrap().lin.contains_point(direction)),
                        None => prop_assert!(f.lin_union.contains_point(direction)),
                    }
                }
                Evidence::DualWitness { w, direction } => prop_assert!(dot(w, direction) < Rational::zero()),
                _ => {}
            }
        }
    }
}
