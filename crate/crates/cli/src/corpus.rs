//! The bundled corpus and the `corpus run` self-check.

use crate::analysis::{self, decomposition, Decomposition};
use crate::commands::{formulation_verdict, CliError};
use crate::problem::{parse_problem, Expected, Point, Problem};
use crate::report::{to_value, EvalSummary, Line, Mark, Output, PointReport, ProblemInfo, TOOL, VERSION};
use cq::{verify_relations, CqVerdict, Evidence, Formulation, Status, Which};
use ratmath::format_vec;
use serde::Serialize;
use serde_json::Map;
use stationarity::{Form, StationarityKind, StationarityVerdict};

pub const FILES: [(&str, &str); 5] = [
    ("E1", include_str!("../corpus/E1.json")),
    ("E2", include_str!("../corpus/E2.json")),
    ("E3", include_str!("../corpus/E3.json")),
    ("E4", include_str!("../corpus/E4.json")),
    ("E5", include_str!("../corpus/E5.json")),
];

pub fn problem(name: &str) -> Option<Problem> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| parse_problem(text, &format!("corpus/{n}.json")).expect("bundled corpus files are valid"))
}

pub fn problems() -> Vec<Problem> {
    FILES.iter().map(|(n, _)| problem(n).expect("listed")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

fn check(out: &mut Vec<Check>, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
    out.push(Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    });
}

fn as_expected(s: Status) -> Expected {
    match s {
        Status::Holds => Expected::Holds,
        Status::Fails => Expected::Fails,
        Status::Unknown => Expected::Unknown,
    }
}

fn stat_expected(v: &StationarityVerdict) -> Expected {
    if v.holds() {
        Expected::Holds
    } else {
        Expected::Fails
    }
}

/// Full analysis of one corpus point.
#[derive(Debug, Clone, Serialize)]
pub struct PointRun {
    #[serde(skip)]
    pub eval: anf_core::EvalResult,
    pub relations: cq::RelationReport,
    pub stationarity: Vec<StationarityVerdict>,
    pub translations: Vec<analysis::Translation>,
    pub decomposition: Vec<Decomposition>,
    pub checks: Vec<Check>,
}

impl PointRun {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn verdict(&self, f: Formulation, which: Which) -> &CqVerdict {
        formulation_verdict(&self.relations.verdicts, f, which).expect("every formulation verdict is reported")
    }

    pub fn stationarity(&self, kind: StationarityKind) -> &StationarityVerdict {
        self.stationarity.iter().find(|v| v.kind == kind).expect("all four stationarity checks run")
    }
}

pub fn run_point(problem: &Problem, point: &Point, recheck: bool) -> Result<PointRun, CliError> {
    let p = &problem.program;
    let a = analysis::analyse(p, point).map_err(|e| CliError::Input(e.to_string()))?;
    let e = &a.eval;
    let relations = verify_relations(&a);
    let stat = analysis::stationarity(p, e, true, true, &[Form::Anf, Form::Mpcc]).map_err(|x| CliError::Input(x.to_string()))?;
    let dec = decomposition(&a);
    let mut checks = Vec::new();

    check(&mut checks, "relations consistent", relations.consistent, {
        let bad: Vec<&str> = relations.arrows.iter().filter(|x| !x.consistent).map(|x| x.id.as_str()).collect();
        bad.join("; ")
    });
    for d in &dec {
        check(
            &mut checks,
            format!("linearized cone decomposition {}", d.formulation),
            d.equal == Some(true),
            format!("{} pieces vs {} branches", d.pieces, d.branches),
        );
    }
    let find = |k: StationarityKind| stat.iter().find(|v| v.kind == k).expect("all four run");
    let (m_anf, m_mpcc, b_anf, b_mpcc) = (
        find(StationarityKind::MAnf),
        find(StationarityKind::MMpcc),
        find(StationarityKind::BAnf),
        find(StationarityKind::BMpcc),
    );
    check(&mut checks, "M-stationarity agrees across forms", m_anf.status == m_mpcc.status, "");
    check(&mut checks, "B-stationarity agrees across forms", b_anf.status == b_mpcc.status, "");
    let translations = match analysis::translations(p, e, &stat) {
        Ok(t) => {
            let expected = [m_anf, m_mpcc].iter().filter(|v| v.holds()).count();
            check(&mut checks, "multiplier translation", t.len() == expected, "");
            t
        }
        Err(err) => {
            check(&mut checks, "multiplier translation", false, err.to_string());
            Vec::new()
        }
    };
    let akq = formulation_verdict(&relations.verdicts, Formulation::INlp, Which::Acq).expect("reported");
    if point.minimizer && akq.status == Status::Holds {
        check(&mut checks, "minimizer with AKQ is M-stationary", m_anf.holds(), "");
    }

    let x = &point.expect;
    let cq_expect = [
        ("AKQ", x.akq, Formulation::INlp, Which::Acq),
        ("GKQ", x.gkq, Formulation::INlp, Which::Gcq),
        ("MPCC-ACQ", x.mpcc_acq, Formulation::IMpcc, Which::Acq),
        ("MPCC-GCQ", x.mpcc_gcq, Formulation::IMpcc, Which::Gcq),
    ];
    for (name, want, f, which) in cq_expect {
        if let Some(want) = want {
            let got = as_expected(formulation_verdict(&relations.verdicts, f, which).expect("reported").status);
            check(&mut checks, format!("expected {name} {want}"), got == want, format!("got {got}"));
        }
    }
    if let Some(want) = x.all_cq {
        let off: Vec<String> = relations
            .verdicts
            .iter()
            .filter(|v| as_expected(v.status) != want)
            .map(CqVerdict::name)
            .collect();
        check(&mut checks, format!("expected every CQ {want}"), off.is_empty(), off.join(", "));
    }
    if let Some(w) = &x.akq_witness {
        let want: Vec<_> = w.iter().map(|n| n.0.clone()).collect();
        let got = match &akq.evidence {
            Evidence::Witness { direction } => Some(direction.clone()),
            _ => None,
        };
        let detail = got.as_ref().map(|d| format!("got {}", format_vec(d))).unwrap_or_else(|| "no witness".into());
        check(&mut checks, format!("expected AKQ witness {}", format_vec(&want)), got.as_ref() == Some(&want), detail);
    }
    for (name, want, v) in [("M", x.m, m_anf), ("B", x.b, b_anf)] {
        if let Some(want) = want {
            let got = stat_expected(v);
            check(&mut checks, format!("expected {name} {want}"), got == want, format!("got {got}"));
        }
    }
    if recheck {
        let mut errors: Vec<String> = relations.verdicts.iter().filter_map(|v| analysis::recheck_cq(&a, v).err()).collect();
        errors.extend(stat.iter().filter_map(|v| analysis::recheck_stationarity(p, e, v).err()));
        check(&mut checks, "certificates recheck", errors.is_empty(), errors.join("; "));
    }

    Ok(PointRun {
        eval: a.eval.clone(),
        relations,
        stationarity: stat,
        translations,
        decomposition: dec,
        checks,
    })
}

#[derive(Serialize)]
struct ProblemRun {
    problem: ProblemInfo,
    points: Vec<PointReport>,
}

#[derive(Serialize)]
struct CorpusSummary {
    points: usize,
    checks: usize,
    failed_checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    recheck: Option<String>,
    exit_code: i32,
}

#[derive(Serialize)]
struct CorpusReport {
    tool: String,
    version: String,
    command: String,
    problems: Vec<ProblemRun>,
    summary: CorpusSummary,
}

fn short(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Unknown => "unknown",
    }
}

pub fn run(recheck: bool) -> Result<Output, CliError> {
    let mut lines = vec![Line::heading(format!(
        "{:<4} {:<16} {:<8} {:<8} {:<9} {:<9} {:<6} {:<6} {}",
        "", "point", "AKQ", "GKQ", "MPCC-ACQ", "MPCC-GCQ", "M", "B", "checks"
    ))];
    let mut runs = Vec::new();
    let (mut n_points, mut n_checks, mut failed) = (0, 0, 0);
    for problem in problems() {
        let mut points = Vec::new();
        for point in &problem.points {
            let r = run_point(&problem, point, recheck)?;
            n_points += 1;
            n_checks += r.checks.len();
            let bad: Vec<&Check> = r.checks.iter().filter(|c| !c.passed).collect();
            failed += bad.len();
            let status = |f, w| short(r.verdict(f, w).status);
            let st = |k| if r.stationarity(k).holds() { "holds" } else { "fails" };
            let row = format!(
                "{:<4} {:<16} {:<8} {:<8} {:<9} {:<9} {:<6} {:<6} {}/{}",
                problem.file.name,
                point.name,
                status(Formulation::INlp, Which::Acq),
                status(Formulation::INlp, Which::Gcq),
                status(Formulation::IMpcc, Which::Acq),
                status(Formulation::IMpcc, Which::Gcq),
                st(StationarityKind::MAnf),
                st(StationarityKind::BAnf),
                r.checks.len() - bad.len(),
                r.checks.len()
            );
            lines.push(Line::plain(0, row));
            for c in bad {
                lines.push(Line::status(1, format!("{}: {}", c.name, c.detail), Mark::Fails));
            }
            let mut body = Map::new();
            let v = to_value(&r);
            if let serde_json::Value::Object(m) = v {
                body.extend(m);
            }
            points.push(PointReport {
                name: point.name.clone(),
                t: point.t.clone(),
                eval: EvalSummary::of(&r.eval),
                body,
            });
        }
        runs.push(ProblemRun {
            problem: ProblemInfo {
                name: problem.file.name.clone(),
                digest: problem.digest.clone(),
            },
            points,
        });
    }
    let exit_code = if failed == 0 { 0 } else { 1 };
    lines.push(Line::plain(
        0,
        format!("{n_points} points, {} of {n_checks} checks passed", n_checks - failed),
    ));
    let report = CorpusReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: "corpus run".into(),
        problems: runs,
        summary: CorpusSummary {
            points: n_points,
            checks: n_checks,
            failed_checks: failed,
            recheck: recheck.then(|| if failed == 0 { "passed".to_string() } else { "see checks".to_string() }),
            exit_code,
        },
    };
    Ok(Output {
        json: to_value(&report),
        lines,
        exit_code,
    })
}
