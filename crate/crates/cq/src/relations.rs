use crate::decide::{check_branch_cq, check_formulation_cq, CqKind, CqVerdict, Status, Which};
use crate::formulation::{BranchData, Formulation, FormulationData, PointAnalysis};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArrowKind {
    Equivalence,
    Implication,
}

/// One proved relation evaluated at the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub id: String,
    pub kind: ArrowKind,
    pub premise: String,
    pub conclusion: String,
    pub premise_status: Status,
    pub conclusion_status: Status,
    /// Both sides decided.
    pub tested: bool,
    pub consistent: bool,
}

impl Arrow {
    fn new(id: String, kind: ArrowKind, premise: String, ps: Status, conclusion: String, cs: Status) -> Arrow {
        let clash = |a: Status, b: Status| a == Status::Holds && b == Status::Fails;
        let consistent = match kind {
            ArrowKind::Implication => !clash(ps, cs),
            ArrowKind::Equivalence => !clash(ps, cs) && !clash(cs, ps),
        };
        Arrow {
            id,
            kind,
            premise,
            conclusion,
            premise_status: ps,
            conclusion_status: cs,
            tested: ps != Status::Unknown && cs != Status::Unknown,
            consistent,
        }
    }
}

/// A one-sided relation whose converse was seen to fail at this point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConverseObservation {
    pub arrow: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub verdicts: Vec<CqVerdict>,
    pub arrows: Vec<Arrow>,
    pub converse: Vec<ConverseObservation>,
    pub consistent: bool,
}

struct Side<'a> {
    data: &'a FormulationData,
    acq: Status,
    gcq: Status,
    branch_acq: Vec<Status>,
    branch_gcq: Vec<Status>,
}

fn all_of(xs: &[Status]) -> Status {
    if xs.contains(&Status::Fails) {
        Status::Fails
    } else if xs.iter().all(|s| *s == Status::Holds) {
        Status::Holds
    } else {
        Status::Unknown
    }
}

fn name(kind: CqKind, f: Formulation) -> String {
    format!("{kind}[{f}]")
}

fn branch_name(which: Which, f: Formulation, b: &BranchData) -> String {
    format!("{}[{f} {}]", CqKind::branch_kind(which), b.label)
}

fn evaluate<'a>(f: &'a FormulationData, verdicts: &mut Vec<CqVerdict>) -> Side<'a> {
    let acq = check_formulation_cq(f, Which::Acq);
    let gcq = check_formulation_cq(f, Which::Gcq);
    let mut side = Side {
        data: f,
        acq: acq.status,
        gcq: gcq.status,
        branch_acq: Vec::new(),
        branch_gcq: Vec::new(),
    };
    verdicts.push(acq);
    verdicts.push(gcq);
    for b in &f.branches {
        let a = check_branch_cq(f.formulation, b, Which::Acq);
        let g = check_branch_cq(f.formulation, b, Which::Gcq);
        side.branch_acq.push(a.status);
        side.branch_gcq.push(g.status);
        verdicts.push(a);
        verdicts.push(g);
    }
    side
}

/// Checks every relation between the four formulations at the analysed point.
pub fn verify_relations(a: &PointAnalysis) -> RelationReport {
    let mut verdicts = Vec::new();
    let [i, e, im, em] = a.formulations().map(|f| evaluate(f, &mut verdicts));
    let mut arrows = Vec::new();
    let mut converse = Vec::new();
    let eqv = ArrowKind::Equivalence;
    let imp = ArrowKind::Implication;

    let kq = |s: &Side, which: Which| -> (String, Status) {
        let st = if which == Which::Acq { s.acq } else { s.gcq };
        (name(CqKind::formulation_kind(s.data.formulation, which), s.data.formulation), st)
    };
    let mut push = |kind: ArrowKind, (pn, ps): (String, Status), (cn, cs): (String, Status), track_converse: bool| {
        let sym = if kind == ArrowKind::Equivalence { "<=>" } else { "=>" };
        let id = format!("{pn} {sym} {cn}");
        if track_converse && cs == Status::Holds && ps == Status::Fails {
            converse.push(ConverseObservation {
                arrow: id.clone(),
                note: format!("{cn} holds while {pn} fails"),
            });
        }
        arrows.push(Arrow::new(id, kind, pn, ps, cn, cs));
    };

    // Abadie-type equivalences across reformulations.
    push(eqv, kq(&i, Which::Acq), kq(&e, Which::Acq), false);
    push(eqv, kq(&im, Which::Acq), kq(&em, Which::Acq), false);
    push(eqv, kq(&i, Which::Acq), kq(&im, Which::Acq), false);
    push(eqv, kq(&e, Which::Acq), kq(&em, Which::Acq), false);
    // Guignard-type implications.
    push(imp, kq(&e, Which::Gcq), kq(&i, Which::Gcq), true);
    push(imp, kq(&em, Which::Gcq), kq(&im, Which::Gcq), true);
    push(imp, kq(&im, Which::Gcq), kq(&i, Which::Gcq), true);
    push(imp, kq(&em, Which::Gcq), kq(&e, Which::Gcq), true);
    // All branch conditions imply the formulation condition.
    for s in [&i, &e, &im, &em] {
        let f = s.data.formulation;
        for which in [Which::Acq, Which::Gcq] {
            let bs = if which == Which::Acq { &s.branch_acq } else { &s.branch_gcq };
            let premise = (format!("{} all branches[{f}]", CqKind::branch_kind(which)), all_of(bs));
            push(imp, premise, kq(s, which), false);
        }
    }
    // Branch-level equivalences between corresponding branches.
    for which in [Which::Acq, Which::Gcq] {
        let st = |s: &Side, k: usize| if which == Which::Acq { s.branch_acq[k] } else { s.branch_gcq[k] };
        let bname = |s: &Side, k: usize| branch_name(which, s.data.formulation, &s.data.branches[k]);
        for (k, bi) in i.data.branches.iter().enumerate() {
            for (j, be) in e.data.branches.iter().enumerate() {
                if be.base_label == bi.anf_label {
                    push(eqv, (bname(&i, k), st(&i, k)), (bname(&e, j), st(&e, j)), false);
                }
            }
        }
        for (pair_a, pair_b) in [(&i, &im), (&e, &em)] {
            for (k, ba) in pair_a.data.branches.iter().enumerate() {
                for (j, bb) in pair_b.data.branches.iter().enumerate() {
                    if bb.anf_label == ba.anf_label {
                        push(eqv, (bname(pair_a, k), st(pair_a, k)), (bname(pair_b, j), st(pair_b, j)), false);
                    }
                }
            }
        }
        for (k, ba) in im.data.branches.iter().enumerate() {
            for (j, bb) in em.data.branches.iter().enumerate() {
                if bb.base_label == ba.anf_label {
                    push(eqv, (bname(&im, k), st(&im, k)), (bname(&em, j), st(&em, j)), false);
                }
            }
        }
    }
    let consistent = arrows.iter().all(|a| a.consistent);
    RelationReport {
        verdicts,
        arrows,
        converse,
        consistent,
    }
}
