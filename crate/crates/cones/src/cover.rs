use ratmath::{dd_hrep_to_vrep, lp_solve, neg_vec, primitive, LpOutcome, LpProblem, PolyCone, Rational};
use num_traits::Zero;

pub const DEFAULT_DEPTH_CAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverResult {
    Covered,
    /// A direction in the cone outside every member.
    NotCovered(Vec<Rational>),
    /// Subdivision depth cap exceeded.
    Unknown,
}

impl CoverResult {
    pub fn is_covered(&self) -> bool {
        matches!(self, CoverResult::Covered)
    }
}

/// `inner ⊆ outer`, checked on the generators of `inner`.
pub fn cone_contains(outer: &PolyCone, inner: &PolyCone) -> bool {
    outer.contains_generators(&dd_hrep_to_vrep(inner))
}

pub fn cone_equal(a: &PolyCone, b: &PolyCone) -> bool {
    cone_contains(a, b) && cone_contains(b, a)
}

/// Closed cone plus rows that must hold strictly.
#[derive(Clone)]
struct Piece {
    cone: PolyCone,
    strict: Vec<Vec<Rational>>,
}

impl Piece {
    fn lp(&self) -> LpProblem {
        let n = self.cone.dim;
        let mut p = LpProblem::new(n);
        for r in self.cone.eq.row_vecs() {
            p.add_eq(r, Rational::zero());
        }
        for r in self.cone.ineq.row_vecs() {
            p.add_ge(r, Rational::zero());
        }
        for r in &self.strict {
            p.add_gt(r.clone(), Rational::zero());
        }
        p
    }

    /// A point satisfying the strict rows, if any exists.
    fn strict_point(&self) -> Option<Vec<Rational>> {
        match lp_solve(&self.lp()).expect("cover LP is well formed") {
            LpOutcome::Infeasible { .. } => None,
            out => out.point().map(|x| x.to_vec()),
        }
    }

    fn closure(&self) -> PolyCone {
        let mut c = self.cone.clone();
        for r in &self.strict {
            c = c.with_ineq(r.clone());
        }
        c
    }

    /// Greedily zeroes coordinates while a strict point survives, then rescales to integers.
    fn sparse_witness(&self, start: Vec<Rational>) -> Vec<Rational> {
        let mut piece = self.clone();
        let mut best = start;
        for j in 0..piece.cone.dim {
            if best[j].is_zero() {
                continue;
            }
            let mut e = vec![Rational::zero(); piece.cone.dim];
            e[j] = Rational::from_integer(1.into());
            let trial = Piece {
                cone: piece.cone.with_eq(e),
                strict: piece.strict.clone(),
            };
            if let Some(x) = trial.strict_point() {
                piece = trial;
                best = x;
            }
        }
        primitive(&best)
    }
}

fn cover_rec(piece: Piece, members: &[PolyCone], depth: usize, cap: usize) -> CoverResult {
    let point = if piece.strict.is_empty() {
        Some(vec![Rational::zero(); piece.cone.dim])
    } else {
        match piece.strict_point() {
            None => return CoverResult::Covered,
            Some(x) => Some(x),
        }
    };
    let closure = piece.closure();
    if members.iter().any(|m| cone_contains(m, &closure)) {
        return CoverResult::Covered;
    }
    let Some((first, rest)) = members.split_first() else {
        let x = point.expect("nonempty piece");
        return CoverResult::NotCovered(piece.sparse_witness(x));
    };
    if depth >= cap {
        return CoverResult::Unknown;
    }
    // piece \ first = ⋃ over rows of first of {piece, row strictly violated}.
    let mut cuts: Vec<Vec<Rational>> = first.ineq.row_vecs().into_iter().map(|r| neg_vec(&r)).collect();
    for r in first.eq.row_vecs() {
        cuts.push(neg_vec(&r));
        cuts.push(r);
    }
    let mut unknown = false;
    for cut in cuts {
        let mut sub = piece.clone();
        sub.strict.push(cut);
        match cover_rec(sub, rest, depth + 1, cap) {
            CoverResult::Covered => {}
            CoverResult::Unknown => unknown = true,
            w @ CoverResult::NotCovered(_) => return w,
        }
    }
    if unknown {
        CoverResult::Unknown
    } else {
        CoverResult::Covered
    }
}

/// Decides `c ⊆ ⋃ members` by recursive subdivision along violated member rows.
pub fn union_covers(members: &[PolyCone], c: &PolyCone, cap: usize) -> CoverResult {
    if members.is_empty() {
        // Even the apex lies outside an empty union.
        let g = dd_hrep_to_vrep(c);
        let w = g.rays.first().or(g.lineality.first()).cloned().unwrap_or_else(|| vec![Rational::zero(); c.dim]);
        return CoverResult::NotCovered(w);
    }
    cover_rec(
        Piece {
            cone: c.clone(),
            strict: Vec::new(),
        },
        members,
        0,
        cap,
    )
}

/// Every cone of `inner` is covered by the union `outer`.
pub fn union_covers_union(outer: &[PolyCone], inner: &[PolyCone], cap: usize) -> CoverResult {
    let mut unknown = false;
    for c in inner {
        match union_covers(outer, c, cap) {
            CoverResult::Covered => {}
            CoverResult::Unknown => unknown = true,
            w => return w,
        }
    }
    if unknown {
        CoverResult::Unknown
    } else {
        CoverResult::Covered
    }
}

/// Set equality of two unions by mutual covering. `None` when the cap was hit.
pub fn unions_equal(a: &[PolyCone], b: &[PolyCone], cap: usize) -> Option<bool> {
    match (union_covers_union(a, b, cap), union_covers_union(b, a, cap)) {
        (CoverResult::NotCovered(_), _) | (_, CoverResult::NotCovered(_)) => Some(false),
        (CoverResult::Covered, CoverResult::Covered) => Some(true),
        _ => None,
    }
}
