use anf_core::{
    constraint_jacobians, eval, jacobian_z, solve_fixed_signature, AbsNormalProgram, QuadraticFunc, SignatureVector,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use ratmath::{rat, ratio, rvec, RatMatrix, Rational};

fn q(n_t: usize, s: usize, terms: &[(&str, i64)]) -> QuadraticFunc {
    QuadraticFunc::from_monomials(n_t, s, terms.iter().map(|(k, c)| (*k, rat(*c)))).unwrap()
}

fn program(n_t: usize, s: usize, f: &[(&str, i64)], ce: &[&[(&str, i64)]], ci: &[&[(&str, i64)]], cz: &[&[(&str, i64)]]) -> AbsNormalProgram {
    AbsNormalProgram {
        n_t,
        s,
        f: q(n_t, 0, f),
        c_e: ce.iter().map(|t| q(n_t, s, t)).collect(),
        c_i: ci.iter().map(|t| q(n_t, s, t)).collect(),
        c_z: cz.iter().map(|t| q(n_t, s, t)).collect(),
        smoothness: 1,
    }
}

fn e1() -> AbsNormalProgram {
    program(2, 1, &[("t2", 1)], &[&[("t2", 1), ("z1", -1)]], &[], &[&[("t1", 1)]])
}

fn e2() -> AbsNormalProgram {
    program(
        2,
        1,
        &[("t1", 1), ("t2", 1)],
        &[&[("t1", 1), ("t2", 1), ("z1", -1)]],
        &[&[("t1", 1)], &[("t2", 1)]],
        &[&[("t1", 1), ("t2", -1)]],
    )
}

fn e3() -> AbsNormalProgram {
    program(2, 1, &[("t2^2", 1)], &[&[("z1^2", 1)]], &[], &[&[("t1", 1)]])
}

#[test]
fn e1_is_valid() {
    assert!(e1().validate().is_valid());
}

#[test]
fn triangularity_violation_is_reported() {
    let p = program(1, 1, &[], &[], &[], &[&[("z1", 1)]]);
    let r = p.validate();
    assert_eq!(r.violations, vec!["triangularity violation at (1,1)".to_string()]);
    let p = program(1, 2, &[], &[], &[], &[&[("t1", 1)], &[("z1*z2", 1)]]);
    assert!(p.validate().violations.contains(&"triangularity violation at (2,2)".to_string()));
}

#[test]
fn asymmetric_quadratic_is_reported() {
    let mut p = e3();
    p.c_e[0].quadratic[(0, 1)] = rat(1);
    let r = p.validate();
    assert!(r.violations.iter().any(|v| v.contains("symmetry violation")), "{r}");
}

#[test]
fn e1_eval_at_origin() {
    let e = eval(&e1(), &rvec(&[0, 0])).unwrap();
    assert_eq!(e.z, rvec(&[0]));
    assert_eq!(e.sigma, SignatureVector(vec![0]));
    assert_eq!(e.alpha, vec![0]);
    assert!(e.is_feasible());
}

#[test]
fn e1_eval_at_two_two() {
    let e = eval(&e1(), &rvec(&[2, 2])).unwrap();
    assert_eq!(e.z, rvec(&[2]));
    assert_eq!(e.sigma, SignatureVector(vec![1]));
    assert!(e.alpha.is_empty());
    assert_eq!(e.residual_e, rvec(&[0]));
}

#[test]
fn e2_eval_at_origin() {
    let e = eval(&e2(), &rvec(&[0, 0])).unwrap();
    assert_eq!(e.z, rvec(&[0]));
    assert_eq!(e.alpha, vec![0]);
    assert_eq!(e.active_i, vec![0, 1]);
}

#[test]
fn eval_rejects_wrong_dimension() {
    assert!(eval(&e1(), &rvec(&[0])).is_err());
}

#[test]
fn jacobian_e1_positive_branch() {
    let p = e1();
    let e = eval(&p, &rvec(&[0, 0])).unwrap();
    let j = jacobian_z(&p, &e, &SignatureVector(vec![1])).unwrap();
    assert_eq!(j, RatMatrix::from_i64(2, &[&[1, 0]]));
    assert!(jacobian_z(&p, &e, &SignatureVector(vec![0])).is_err());
    let e22 = eval(&p, &rvec(&[2, 2])).unwrap();
    assert!(jacobian_z(&p, &e22, &SignatureVector(vec![-1])).is_err());
}

#[test]
fn jacobian_of_chained_switching() {
    let p = program(1, 2, &[], &[], &[], &[&[("t1", 1)], &[("z1", 1)]]);
    let e = eval(&p, &rvec(&[3])).unwrap();
    assert_eq!(e.z, rvec(&[3, 3]));
    let j = jacobian_z(&p, &e, &SignatureVector(vec![1, 1])).unwrap();
    assert_eq!(j.row(0), j.row(1));
    assert_eq!(j.row(1), &rvec(&[1])[..]);
}

#[test]
fn jacobian_without_nilpotent_part_is_d1() {
    let p = e2();
    let e = eval(&p, &rvec(&[1, 4])).unwrap();
    let jac = constraint_jacobians(&p, &e);
    assert_eq!(jacobian_z(&p, &e, &e.sigma).unwrap(), jac.d1_z);
}

#[test]
fn constraint_jacobians_e1_and_e3() {
    let p = e1();
    let jac = constraint_jacobians(&p, &eval(&p, &rvec(&[0, 0])).unwrap());
    assert_eq!(jac.d1_e, RatMatrix::from_i64(2, &[&[0, 1]]));
    assert_eq!(jac.d2_e, RatMatrix::from_i64(1, &[&[-1]]));
    let p = e3();
    let jac = constraint_jacobians(&p, &eval(&p, &rvec(&[0, 5])).unwrap());
    assert_eq!(jac.d2_e, RatMatrix::from_i64(1, &[&[0]]));
    let jac = constraint_jacobians(&p, &eval(&p, &rvec(&[-3, 0])).unwrap());
    assert_eq!(jac.d2_e, RatMatrix::from_i64(1, &[&[6]]));
}

#[test]
fn affine_jacobians_do_not_depend_on_point() {
    let p = e2();
    let a = constraint_jacobians(&p, &eval(&p, &rvec(&[0, 0])).unwrap());
    let b = constraint_jacobians(&p, &eval(&p, &rvec(&[-7, 3])).unwrap());
    assert_eq!(a, b);
}

#[test]
fn signature_order() {
    let s = |x: &str| SignatureVector::parse(x).unwrap();
    assert!(s("+-").succeq(&s("0-")));
    assert!(s("+-").succeq(&s("00")));
    assert!(!s("+-").succeq(&s("--")));
    assert!(!s("0-").succeq(&s("+-")));
    assert!(s("+-").is_definite() && !s("+0").is_definite());
    assert_eq!(s("+-0").to_string(), "+-0");
}

// Random triangular programs.

fn coef() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=2).prop_map(|(n, d)| ratio(n, d))
}

fn random_func(n_t: usize, s: usize, zeta_limit: usize, affine: bool) -> impl Strategy<Value = QuadraticFunc> {
    let n = n_t + s;
    (coef(), prop::collection::vec(coef(), n), prop::collection::vec(coef(), n * n), prop::collection::vec(any::<bool>(), n)).prop_map(
        move |(c, mut b, qs, mask)| {
            for j in n_t + zeta_limit..n {
                b[j] = Rational::zero();
            }
            let mut qm = RatMatrix::zeros(n, n);
            if !affine {
                for j in 0..n {
                    for k in 0..=j {
                        let usable = |x: usize| x < n_t + zeta_limit && mask[x];
                        if usable(j) && usable(k) {
                            let v = qs[j * n + k].clone();
                            qm[(j, k)] = v.clone();
                            qm[(k, j)] = v;
                        }
                    }
                }
            }
            QuadraticFunc::new(c, b, qm)
        },
    )
}

fn random_program(affine: bool) -> impl Strategy<Value = AbsNormalProgram> {
    (1usize..=3, 0usize..=3, 0usize..=2, 0usize..=2).prop_flat_map(move |(n_t, s, m1, m2)| {
        let cz: Vec<_> = (0..s).map(|i| random_func(n_t, s, i, affine).boxed()).collect();
        (
            prop::collection::vec(random_func(n_t, s, s, affine), m1),
            prop::collection::vec(random_func(n_t, s, s, affine), m2),
            cz,
        )
            .prop_map(move |(c_e, c_i, c_z)| AbsNormalProgram {
                n_t,
                s,
                f: QuadraticFunc::zero(n_t),
                c_e,
                c_i,
                c_z,
                smoothness: 1,
            })
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(coef(), n)
}

fn dominating(sigma: &SignatureVector, free: &[bool]) -> SignatureVector {
    SignatureVector(
        sigma
            .0
            .iter()
            .zip(free)
            .map(|(&x, &up)| if x != 0 { x } else if up { 1 } else { -1 })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn switching_residual_is_zero((p, t) in random_program(false).prop_flat_map(|p| { let n = p.n_t; (Just(p), point(n)) })) {
        prop_assert!(p.validate().is_valid());
        let e = eval(&p, &t).unwrap();
        let y = e.block_point();
        for i in 0..p.s {
            prop_assert_eq!(&p.c_z[i].eval(&y), &e.z[i]);
        }
    }

    #[test]
    fn abs_equals_sigma_times_z(
        (p, t, free) in random_program(false).prop_flat_map(|p| { let n = p.n_t; let s = p.s; (Just(p), point(n), prop::collection::vec(any::<bool>(), s)) })
    ) {
        let e = eval(&p, &t).unwrap();
        let sig = dominating(&e.sigma, &free);
        for i in 0..p.s {
            prop_assert_eq!(e.z[i].abs(), Rational::from_integer(sig.0[i].into()) * &e.z[i]);
        }
        prop_assert_eq!(solve_fixed_signature(&p, &sig, &t).unwrap(), e.z);
    }

    #[test]
    fn affine_jacobian_is_difference_quotient(
        (p, t, d, free, h) in random_program(true).prop_flat_map(|p| {
            let n = p.n_t; let s = p.s;
            (Just(p), point(n), point(n), prop::collection::vec(any::<bool>(), s), coef())
        })
    ) {
        prop_assume!(!h.is_zero());
        let e = eval(&p, &t).unwrap();
        let sig = dominating(&e.sigma, &free);
        let j = jacobian_z(&p, &e, &sig).unwrap();
        let z0 = solve_fixed_signature(&p, &sig, &t).unwrap();
        let t1: Vec<Rational> = t.iter().zip(&d).map(|(a, b)| a + &h * b).collect();
        let z1 = solve_fixed_signature(&p, &sig, &t1).unwrap();
        let jd = j.mul_vec(&d);
        for i in 0..p.s {
            prop_assert_eq!((&z1[i] - &z0[i]) / &h, jd[i].clone());
        }
    }

    #[test]
    fn definite_signature_is_locally_constant((p, t) in random_program(false).prop_flat_map(|p| { let n = p.n_t; (Just(p), point(n)) })) {
        let e = eval(&p, &t).unwrap();
        prop_assume!(e.sigma.is_definite());
        // Halve the box until every corner and axis point keeps the signature.
        let mut eps = rat(1);
        let mut found = false;
        for _ in 0..60 {
            let mut ok = true;
            for mask in 0..(1u32 << p.n_t) {
                let corner: Vec<Rational> = (0..p.n_t)
                    .map(|j| if mask >> j & 1 == 1 { &t[j] + &eps } else { &t[j] - &eps })
                    .collect();
                if eval(&p, &corner).unwrap().sigma != e.sigma {
                    ok = false;
                    break;
                }
            }
            for j in 0..p.n_t {
                let mut x = t.clone();
                x[j] += &eps / rat(3);
                if eval(&p, &x).unwrap().sigma != e.sigma {
                    ok = false;
                }
            }
            if ok {
                found = true;
                break;
            }
            eps /= rat(2);
        }
        prop_assert!(found);
        prop_assert!(eps.is_positive());
    }
}
