#![allow(dead_code)]

use anf_core::{eval, AbsNormalProgram, QuadraticFunc};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use ratmath::{rat, ratio, RatMatrix, Rational};

pub fn q(n_t: usize, s: usize, terms: &[(&str, i64)]) -> QuadraticFunc {
    QuadraticFunc::from_monomials(n_t, s, terms.iter().map(|(k, c)| (*k, rat(*c)))).unwrap()
}

pub fn program(
    n_t: usize,
    s: usize,
    f: &[(&str, i64)],
    ce: &[&[(&str, i64)]],
    ci: &[&[(&str, i64)]],
    cz: &[&[(&str, i64)]],
) -> AbsNormalProgram {
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

pub fn e1() -> AbsNormalProgram {
    program(2, 1, &[("t2", 1)], &[&[("t2", 1), ("z1", -1)]], &[], &[&[("t1", 1)]])
}

pub fn e2() -> AbsNormalProgram {
    program(
        2,
        1,
        &[("t1", 1), ("t2", 1)],
        &[&[("t1", 1), ("t2", 1), ("z1", -1)]],
        &[&[("t1", 1)], &[("t2", 1)]],
        &[&[("t1", 1), ("t2", -1)]],
    )
}

pub fn e3() -> AbsNormalProgram {
    program(2, 1, &[("t2^2", 1)], &[&[("z1^2", 1)]], &[], &[&[("t1", 1)]])
}

fn coef() -> impl Strategy<Value = Rational> {
    (-2i64..=2, 1i64..=2).prop_map(|(n, d)| ratio(n, d))
}

fn func(n: usize, usable: usize, affine: bool) -> impl Strategy<Value = QuadraticFunc> {
    (prop::collection::vec(coef(), n), prop::collection::vec(coef(), n * n), any::<bool>()).prop_map(move |(mut b, qs, quad)| {
        for x in b.iter_mut().skip(usable) {
            *x = Rational::zero();
        }
        let mut qm = RatMatrix::zeros(n, n);
        if quad && !affine {
            for j in 0..usable {
                for k in 0..=j {
                    qm[(j, k)] = qs[j * n + k].clone();
                    qm[(k, j)] = qs[j * n + k].clone();
                }
            }
        }
        QuadraticFunc::new(Rational::zero(), b, qm)
    })
}

/// Random triangular program together with a feasible point. Constants are shifted so that
/// the point is feasible, a flagged subset of switching entries vanishes and a flagged
/// subset of inequalities is active.
pub fn feasible_instance(affine: bool) -> impl Strategy<Value = (AbsNormalProgram, Vec<Rational>)> {
    (1usize..=3, 0usize..=3, 0usize..=2, 0usize..=2).prop_flat_map(move |(n_t, s, m1, m2)| {
        let n = n_t + s;
        (
            prop::collection::vec(func(n, n, affine), m1),
            prop::collection::vec(func(n, n, affine), m2),
            (0..s).map(|i| func(n, n_t + i, affine).boxed()).collect::<Vec<_>>(),
            prop::collection::vec(coef(), n_t),
            prop::collection::vec(any::<bool>(), s),
            prop::collection::vec(any::<bool>(), m2),
        )
            .prop_map(move |(c_e, c_i, c_z, t, kinks, active)| {
                let mut p = AbsNormalProgram {
                    n_t,
                    s,
                    f: QuadraticFunc::zero(n_t),
                    c_e,
                    c_i,
                    c_z,
                    smoothness: 1,
                };
                let mut y = t.clone();
                y.resize(n, Rational::zero());
                for i in 0..s {
                    let v = p.c_z[i].eval(&y);
                    if kinks[i] {
                        p.c_z[i].constant -= v;
                    } else if v.is_zero() {
                        p.c_z[i].constant += rat(1);
                    }
                    y[n_t + i] = p.c_z[i].eval(&y).abs();
                }
                for c in &mut p.c_e {
                    let v = c.eval(&y);
                    c.constant -= v;
                }
                for (k, c) in p.c_i.iter_mut().enumerate() {
                    let v = c.eval(&y);
                    c.constant -= v;
                    if !active[k] {
                        c.constant += rat(1);
                    }
                }
                assert!(eval(&p, &t).unwrap().is_feasible());
                (p, t)
            })
    })
}

/// E4: `t₂² = |t₁|²` with `z̃ = t₁`, two crossing lines.
pub fn e4() -> AbsNormalProgram {
    program(2, 1, &[("t1^2", 1), ("t2^2", 1)], &[&[("t2^2", 1), ("z1^2", -1)]], &[], &[&[("t1", 1)]])
}

/// E5: `t₂(t₂ − |t₁|) = 0`, the x-axis together with the graph of `|t₁|`.
pub fn e5() -> AbsNormalProgram {
    program(2, 1, &[("t1^2", 1), ("t2^2", 1)], &[&[("t2^2", 1), ("t2*z1", -1)]], &[], &[&[("t1", 1)]])
}

pub fn cone(eq: &[&[i64]], ineq: &[&[i64]]) -> ratmath::PolyCone {
    let rows = |rs: &[&[i64]]| rs.iter().map(|r| ratmath::rvec(r)).collect::<Vec<_>>();
    ratmath::PolyCone::from_rows(3, rows(eq), rows(ineq))
}

fn annotations(plus: Vec<ratmath::PolyCone>, minus: Vec<ratmath::PolyCone>) -> cq::TangentAnnotations {
    let mut a = cq::TangentAnnotations::none();
    a.pieces.insert(anf_core::SignatureVector(vec![1]), plus);
    a.pieces.insert(anf_core::SignatureVector(vec![-1]), minus);
    a
}

/// The feasible set of E3 is the line `t₁ = 0`.
pub fn e3_annotations() -> cq::TangentAnnotations {
    let line = cone(&[&[1, 0, 0], &[0, 0, 1]], &[]);
    annotations(vec![line.clone()], vec![line])
}

pub fn e4_annotations() -> cq::TangentAnnotations {
    annotations(
        vec![
            cone(&[&[-1, 1, 0], &[-1, 0, 1]], &[&[1, 0, 0]]),
            cone(&[&[1, 1, 0], &[-1, 0, 1]], &[&[1, 0, 0]]),
        ],
        vec![
            cone(&[&[-1, 1, 0], &[-1, 0, 1]], &[&[-1, 0, 0]]),
            cone(&[&[1, 1, 0], &[-1, 0, 1]], &[&[-1, 0, 0]]),
        ],
    )
}

pub fn e5_annotations() -> cq::TangentAnnotations {
    annotations(
        vec![
            cone(&[&[0, 1, 0], &[-1, 0, 1]], &[&[1, 0, 0]]),
            cone(&[&[-1, 1, 0], &[-1, 0, 1]], &[&[1, 0, 0]]),
        ],
        vec![
            cone(&[&[0, 1, 0], &[-1, 0, 1]], &[&[-1, 0, 0]]),
            cone(&[&[1, 1, 0], &[-1, 0, 1]], &[&[-1, 0, 0]]),
        ],
    )
}
