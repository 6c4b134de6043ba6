use crate::analysis::{self, kind_name};
use crate::args::{Cli, Command, CorpusAction, FormArg, Target};
use crate::corpus;
use crate::problem::{load_problem, parse_point_arg, program_to_file, Point, Problem, ProblemError, Terms, Num};
use crate::report::{to_value, EvalSummary, Line, Mark, Output, PointReport, ProblemInfo, Report, Summary, Tally, TOOL, VERSION};
use anf_core::{eval, EvalResult, QuadraticFunc};
use cones::{dual_cone, dual_union};
use cq::{check_branch_cq, check_formulation_cq, verify_relations, CqVerdict, Evidence, Formulation, PointAnalysis, Which};
use ratmath::{format_vec, PolyCone};
use serde::Serialize;
use serde_json::{json, Map, Value};
use stationarity::{Form, StationarityEvidence, StationarityVerdict};
use std::path::Path;
use thiserror::Error;
use transforms::{lift_point, phi_inv, to_mpcc, to_slack, MpccPoint, MpccProgram};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("{0}")]
    Input(String),
    #[error("recheck failed: {0}")]
    Recheck(String),
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

/// A file on disk, or a bundled corpus problem when no such file exists.
pub fn resolve_problem(path: &Path) -> Result<Problem, CliError> {
    if path.exists() {
        return Ok(load_problem(path)?);
    }
    let bare = path.parent().is_none_or(|d| d.as_os_str().is_empty());
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    match corpus::problem(stem) {
        Some(p) if bare => Ok(p),
        _ => Err(CliError::Input(format!("{}: no such file", path.display()))),
    }
}

fn parse_negate(spec: &str, m2: usize) -> Result<Vec<bool>, CliError> {
    let mut out = vec![false; m2];
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let k: usize = part.parse().map_err(|_| CliError::Input(format!("--negate-slack: '{part}' is not an index")))?;
        if k == 0 || k > m2 {
            return Err(CliError::Input(format!("--negate-slack: index {k} outside 1..={m2}")));
        }
        out[k - 1] = true;
    }
    Ok(out)
}

/// Points named by `--point` (by name or coordinates), else all points in the file.
pub fn select_points(problem: &Problem, target: &Target) -> Result<Vec<Point>, CliError> {
    let mut points = match &target.point {
        None => problem.points.clone(),
        Some(arg) => {
            if let Some(p) = problem.points.iter().find(|p| &p.name == arg) {
                vec![p.clone()]
            } else {
                let t = parse_point_arg(arg).map_err(|e| CliError::Input(format!("--point: {e}")))?;
                if t.len() != problem.program.n_t {
                    return Err(CliError::Input(format!(
                        "--point has {} coordinates, expected n_t = {}",
                        t.len(),
                        problem.program.n_t
                    )));
                }
                match problem.points.iter().find(|p| p.t == t) {
                    Some(p) => vec![p.clone()],
                    None => vec![Point {
                        name: format_vec(&t),
                        t,
                        minimizer: false,
                        negate: vec![false; problem.program.m2()],
                        annotations: Default::default(),
                        expect: Default::default(),
                    }],
                }
            }
        }
    };
    if points.is_empty() {
        return Err(CliError::Input("the problem file lists no points; pass --point".into()));
    }
    if let Some(spec) = &target.negate_slack {
        let negate = parse_negate(spec, problem.program.m2())?;
        for p in &mut points {
            p.negate = negate.clone();
        }
    }
    Ok(points)
}

struct Ctx<'a> {
    problem: &'a Problem,
    point: &'a Point,
    e: EvalResult,
    recheck: bool,
    tally: Tally,
    lines: Vec<Line>,
    body: Map<String, Value>,
}

impl Ctx<'_> {
    fn analysis(&self) -> Result<PointAnalysis, CliError> {
        analysis::analyse(&self.problem.program, self.point).map_err(|e| CliError::Input(format!("point {}: {e}", self.point.name)))
    }

    fn put<T: Serialize>(&mut self, key: &str, v: &T) {
        self.body.insert(key.to_string(), to_value(v));
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let (name, target) = match &cli.command {
        Command::Corpus { action: CorpusAction::Run } => return corpus::run(cli.recheck),
        Command::Eval(t) => ("eval", t),
        Command::Branches(t) => ("branches", t),
        Command::Reformulate { target, .. } => ("reformulate", target),
        Command::Cones { target, .. } => ("cones", target),
        Command::CheckCq { target, .. } => ("check-cq", target),
        Command::CheckStationarity { target, .. } => ("check-stationarity", target),
        Command::VerifyRelations(t) => ("verify-relations", t),
    };
    let problem = resolve_problem(&target.problem)?;
    let points = select_points(&problem, target)?;
    let mut tally = Tally::default();
    let mut lines = vec![Line::heading(format!("{} [{}]  {name}", problem.file.name, &problem.digest[..12]))];
    let mut reports = Vec::new();
    for point in &points {
        let e = eval(&problem.program, &point.t).map_err(input)?;
        let mut ctx = Ctx {
            problem: &problem,
            point,
            e,
            recheck: cli.recheck,
            tally: Tally::default(),
            lines: Vec::new(),
            body: Map::new(),
        };
        match &cli.command {
            Command::Eval(_) => eval_cmd(&mut ctx),
            Command::Branches(_) => branches_cmd(&mut ctx)?,
            Command::Reformulate { kind, .. } => reformulate_point(&mut ctx, kind.slack, kind.mpcc),
            Command::Cones { dual, .. } => cones_cmd(&mut ctx, *dual)?,
            Command::CheckCq {
                all,
                akq,
                gkq,
                mpcc_acq,
                mpcc_gcq,
                branches,
                ..
            } => {
                let none = !(*all || *akq || *gkq || *mpcc_acq || *mpcc_gcq || *branches);
                let sel = CqSelection {
                    akq: *all || *akq || none,
                    gkq: *all || *gkq || none,
                    mpcc_acq: *all || *mpcc_acq || none,
                    mpcc_gcq: *all || *mpcc_gcq || none,
                    branches: *branches,
                };
                check_cq_cmd(&mut ctx, sel)?
            }
            Command::CheckStationarity { m, b, form, .. } => {
                let forms = match form {
                    Some(FormArg::Anf) => vec![Form::Anf],
                    Some(FormArg::Mpcc) => vec![Form::Mpcc],
                    None => vec![Form::Anf, Form::Mpcc],
                };
                let both = !(*m || *b);
                stationarity_cmd(&mut ctx, *m || both, *b || both, &forms)?
            }
            Command::VerifyRelations(_) => relations_cmd(&mut ctx)?,
            Command::Corpus { .. } => unreachable!(),
        }
        lines.push(Line::plain(
            0,
            format!("point {}  t = {}  σ = {}", point.name, format_vec(&point.t), ctx.e.sigma),
        ));
        lines.extend(ctx.lines);
        let t = &mut tally;
        t.holds += ctx.tally.holds;
        t.fails += ctx.tally.fails;
        t.unknown += ctx.tally.unknown;
        t.inconsistent += ctx.tally.inconsistent;
        reports.push(PointReport {
            name: point.name.clone(),
            t: point.t.clone(),
            eval: EvalSummary::of(&ctx.e),
            body: ctx.body,
        });
    }
    let derived = match &cli.command {
        Command::Reformulate { kind, .. } => Some(derived_program(&problem, kind.slack, kind.mpcc)),
        _ => None,
    };
    let exit_code = tally.exit_code();
    let report = Report {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: name.into(),
        problem: ProblemInfo {
            name: problem.file.name.clone(),
            digest: problem.digest.clone(),
        },
        derived,
        points: reports,
        summary: Summary {
            tally,
            recheck: cli.recheck.then(|| "passed".to_string()),
            exit_code,
        },
    };
    lines.push(Line::plain(
        0,
        format!(
            "summary: {} holds, {} fails, {} unknown, {} inconsistent{}",
            tally.holds,
            tally.fails,
            tally.unknown,
            tally.inconsistent,
            if cli.recheck { "; recheck passed" } else { "" }
        ),
    ));
    Ok(Output {
        json: to_value(&report),
        lines,
        exit_code,
    })
}

fn one_based(xs: &[usize]) -> String {
    let v: Vec<String> = xs.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn eval_cmd(ctx: &mut Ctx) {
    let e = &ctx.e;
    ctx.lines.push(Line::plain(1, format!("z = {}", format_vec(&e.z))));
    ctx.lines.push(Line::plain(1, format!("kinks = {}", one_based(&e.alpha))));
    ctx.lines.push(Line::plain(1, format!("active inequalities = {}", one_based(&e.active_i))));
    ctx.lines.push(Line::plain(1, format!("equality residuals = {}", format_vec(&e.residual_e))));
    ctx.lines.push(Line::plain(1, format!("inequality values = {}", format_vec(&e.value_i))));
    ctx.lines.push(Line::plain(1, format!("feasible = {}", e.is_feasible())));
}

#[derive(Serialize)]
struct BranchSummary<'a> {
    label: &'a transforms::BranchSpec,
    anf_label: &'a anf_core::SignatureVector,
    base_label: &'a anf_core::SignatureVector,
    dim: usize,
    tangent: &'a cq::TangentSource,
}

fn branch_summaries(f: &cq::FormulationData) -> Vec<BranchSummary<'_>> {
    f.branches
        .iter()
        .map(|b| BranchSummary {
            label: &b.label,
            anf_label: &b.anf_label,
            base_label: &b.base_label,
            dim: b.problem.dim,
            tangent: &b.source,
        })
        .collect()
}

fn branches_cmd(ctx: &mut Ctx) -> Result<(), CliError> {
    let a = ctx.analysis()?;
    let mut out = Vec::new();
    for f in a.formulations() {
        ctx.lines.push(Line::plain(1, format!("{} (dim {}): {} branches", f.formulation, f.dim, f.branches.len())));
        for b in &f.branches {
            ctx.lines.push(Line::plain(2, format!("{}  tangent: {}", b.label, b.source.tag())));
        }
        out.push(json!({
            "formulation": f.formulation,
            "dim": f.dim,
            "branches": branch_summaries(f),
        }));
    }
    ctx.put("formulations", &out);
    Ok(())
}

fn terms(q: &QuadraticFunc, names: &[String]) -> Terms {
    q.to_named_monomials(names).into_iter().map(|(k, v)| (k, Num(v))).collect()
}

#[derive(Serialize)]
struct MpccFile {
    name: String,
    variables: Vec<String>,
    objective: Terms,
    eq: Vec<Terms>,
    ineq: Vec<Terms>,
    /// Complementarity pairs `0 ≤ u ⊥ v ≥ 0`.
    pairs: Vec<[String; 2]>,
}

fn mpcc_file(name: String, mp: &MpccProgram, x_names: Vec<String>) -> MpccFile {
    let mut vars = x_names;
    vars.extend((1..=mp.s).map(|i| format!("u{i}")));
    vars.extend((1..=mp.s).map(|i| format!("v{i}")));
    MpccFile {
        name,
        objective: terms(&mp.f, &vars),
        eq: mp.eq.iter().map(|q| terms(q, &vars)).collect(),
        ineq: mp.ineq.iter().map(|q| terms(q, &vars)).collect(),
        pairs: mp.pairs.iter().map(|&(u, v)| [vars[u].clone(), vars[v].clone()]).collect(),
        variables: vars,
    }
}

fn t_names(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("t{j}")).collect()
}

fn derived_program(problem: &Problem, slack: bool, mpcc: bool) -> Value {
    let p = &problem.program;
    let name = &problem.file.name;
    if slack {
        let lifted = to_slack(p).lifted;
        let desc = format!("slack form of {name}: t{}.. are the slacks w, z{}.. their switching variables", p.n_t + 1, p.s + 1);
        to_value(&program_to_file(&format!("{name}-slack"), &desc, &lifted))
    } else if mpcc {
        to_value(&mpcc_file(format!("{name}-mpcc"), &to_mpcc(p), t_names(p.n_t)))
    } else {
        let lifted = to_slack(p).lifted;
        let mut names = t_names(p.n_t);
        names.extend((1..=p.m2()).map(|k| format!("w{k}")));
        to_value(&mpcc_file(format!("{name}-slack-mpcc"), &to_mpcc(&lifted), names))
    }
}

#[derive(Serialize)]
struct MpccPointOut {
    #[serde(with = "ratmath::rational::serde_rational_vec")]
    x: Vec<ratmath::Rational>,
    #[serde(with = "ratmath::rational::serde_rational_vec")]
    u: Vec<ratmath::Rational>,
    #[serde(with = "ratmath::rational::serde_rational_vec")]
    v: Vec<ratmath::Rational>,
}

impl From<MpccPoint> for MpccPointOut {
    fn from(p: MpccPoint) -> Self {
        MpccPointOut { x: p.x, u: p.u, v: p.v }
    }
}

fn reformulate_point(ctx: &mut Ctx, slack: bool, mpcc: bool) {
    let e = &ctx.e;
    if slack {
        let x = lift_point(e, &ctx.point.negate);
        ctx.lines.push(Line::plain(1, format!("slack point = {}", format_vec(&x))));
        let v = json!({ "t": to_value(&x.iter().map(|r| Num(r.clone())).collect::<Vec<_>>()) });
        ctx.body.insert("slack_point".into(), v);
    } else if mpcc {
        let pt = phi_inv(&e.t, &e.z);
        ctx.lines.push(Line::plain(1, format!("mpcc point = {}", format_vec(&pt.stacked()))));
        ctx.put("mpcc_point", &MpccPointOut::from(pt));
    } else {
        let x = lift_point(e, &ctx.point.negate);
        let lifted = to_slack(&ctx.problem.program).lifted;
        let z = eval(&lifted, &x).expect("lifted point has the lifted dimension").z;
        let pt = phi_inv(&x, &z);
        ctx.lines.push(Line::plain(1, format!("slack mpcc point = {}", format_vec(&pt.stacked()))));
        ctx.put("slack_mpcc_point", &MpccPointOut::from(pt));
    }
}

fn cones_cmd(ctx: &mut Ctx, dual: bool) -> Result<(), CliError> {
    let a = ctx.analysis()?;
    let mut out = Vec::new();
    for f in a.formulations() {
        ctx.lines.push(Line::plain(
            1,
            format!("{}: linearized cone is a union of {} pieces in dimension {}", f.formulation, f.lin_union.members.len(), f.dim),
        ));
        let mut branches = Vec::new();
        let mut tangent_dual: Option<PolyCone> = Some(PolyCone::full(f.dim));
        for b in &f.branches {
            let tangent = b.tangent.as_ref().map(|ps| ps.iter().map(PolyCone::rows).collect::<Vec<_>>());
            match (&b.tangent, &mut tangent_dual) {
                (Some(ps), Some(acc)) => {
                    for c in ps {
                        *acc = acc.intersect(&dual_cone(c));
                    }
                }
                _ => tangent_dual = None,
            }
            ctx.lines.push(Line::plain(
                2,
                format!(
                    "{}: linearized {} eq / {} ineq rows; tangent {}",
                    b.label,
                    b.lin.eq.rows(),
                    b.lin.ineq.rows(),
                    b.source.tag()
                ),
            ));
            let mut entry = json!({
                "label": b.label,
                "linearized": b.lin.rows(),
                "tangent_source": b.source,
                "tangent": tangent,
            });
            if dual {
                entry["linearized_dual"] = to_value(&dual_cone(&b.lin).rows());
            }
            branches.push(entry);
        }
        let mut entry = json!({
            "formulation": f.formulation,
            "dim": f.dim,
            "linearized": f.lin_union,
            "branches": branches,
        });
        if dual {
            entry["linearized_dual"] = to_value(&dual_union(&f.lin_union).rows());
            entry["tangent_dual"] = to_value(&tangent_dual.as_ref().map(PolyCone::rows));
        }
        out.push(entry);
    }
    ctx.put("formulations", &out);
    Ok(())
}

struct CqSelection {
    akq: bool,
    gkq: bool,
    mpcc_acq: bool,
    mpcc_gcq: bool,
    branches: bool,
}

fn evidence_text(v: &CqVerdict) -> String {
    match &v.evidence {
        Evidence::TangentCovers { .. } => "tangent cone covers linearized cone".into(),
        Evidence::DualContained { .. } => "dual containment".into(),
        Evidence::Witness { direction } => format!("witness d = {}", format_vec(direction)),
        Evidence::DualWitness { w, direction } => format!("w = {}, d = {}", format_vec(w), format_vec(direction)),
        Evidence::Blocked { branches, .. } => {
            let names: Vec<String> = branches.iter().map(|b| b.to_string()).collect();
            format!("no tangent cone for {}", names.join(", "))
        }
    }
}

fn push_verdict(ctx: &mut Ctx, v: &CqVerdict, depth: usize) {
    let mark = ctx.tally.cq(v.status);
    ctx.lines.push(Line::status(depth, v.name(), mark));
    if v.status != cq::Status::Holds {
        ctx.lines.push(Line::plain(depth + 1, evidence_text(v)));
    }
}

fn check_cq_cmd(ctx: &mut Ctx, sel: CqSelection) -> Result<(), CliError> {
    let a = ctx.analysis()?;
    let mut verdicts = Vec::new();
    for f in a.formulations() {
        let (acq, gcq) = if f.formulation.is_mpcc() {
            (sel.mpcc_acq, sel.mpcc_gcq)
        } else {
            (sel.akq, sel.gkq)
        };
        if acq {
            verdicts.push(check_formulation_cq(f, Which::Acq));
        }
        if gcq {
            verdicts.push(check_formulation_cq(f, Which::Gcq));
        }
        if sel.branches {
            for b in &f.branches {
                verdicts.push(check_branch_cq(f.formulation, b, Which::Acq));
                verdicts.push(check_branch_cq(f.formulation, b, Which::Gcq));
            }
        }
    }
    if ctx.recheck {
        for v in &verdicts {
            analysis::recheck_cq(&a, v).map_err(CliError::Recheck)?;
        }
    }
    for v in &verdicts {
        push_verdict(ctx, v, 1);
    }
    ctx.put("verdicts", &verdicts);
    Ok(())
}

fn stationarity_text(v: &StationarityVerdict) -> String {
    match &v.evidence {
        StationarityEvidence::Multipliers { cases, .. } if cases.is_empty() => "multipliers found".into(),
        StationarityEvidence::Multipliers { cases, .. } => {
            let cs: Vec<String> = cases.iter().map(|c| format!("{}:{}", c.index + 1, to_value(&c.case).as_str().unwrap_or(""))).collect();
            format!("multipliers found, cases {}", cs.join(" "))
        }
        StationarityEvidence::NoMultipliers { refutations } => format!("no multipliers in any of {} sign-case combinations", refutations.len()),
        StationarityEvidence::Branches { branches } => {
            let descent: Vec<String> = branches
                .iter()
                .filter_map(|b| match b {
                    stationarity::BranchResult::Descent { label, direction } => Some(format!("{label} d = {}", format_vec(direction))),
                    _ => None,
                })
                .collect();
            if descent.is_empty() {
                format!("{} branches stationary", branches.len())
            } else {
                format!("descent on {}", descent.join("; "))
            }
        }
    }
}

fn stationarity_cmd(ctx: &mut Ctx, m: bool, b: bool, forms: &[Form]) -> Result<(), CliError> {
    let p = &ctx.problem.program;
    if !ctx.e.is_feasible() {
        return Err(CliError::Input(format!("point {} is infeasible", ctx.point.name)));
    }
    let at = |e: stationarity::StationarityError| CliError::Input(format!("point {}: {e}", ctx.point.name));
    let verdicts = analysis::stationarity(p, &ctx.e, m, b, forms).map_err(at)?;
    let translations = analysis::translations(p, &ctx.e, &verdicts).map_err(at)?;
    if ctx.recheck {
        for v in &verdicts {
            analysis::recheck_stationarity(p, &ctx.e, v).map_err(CliError::Recheck)?;
        }
    }
    for v in &verdicts {
        let mark = ctx.tally.stat(v.status);
        ctx.lines.push(Line::status(1, kind_name(v.kind), mark));
        ctx.lines.push(Line::plain(2, stationarity_text(v)));
    }
    ctx.put("stationarity", &verdicts);
    if !translations.is_empty() {
        ctx.put("translations", &translations);
    }
    Ok(())
}

fn relations_cmd(ctx: &mut Ctx) -> Result<(), CliError> {
    let a = ctx.analysis()?;
    let rel = verify_relations(&a);
    if ctx.recheck {
        for v in &rel.verdicts {
            analysis::recheck_cq(&a, v).map_err(CliError::Recheck)?;
        }
    }
    for v in rel.verdicts.iter().filter(|v| v.label.is_none()) {
        push_verdict(ctx, v, 1);
    }
    let branch_level: Vec<&CqVerdict> = rel.verdicts.iter().filter(|v| v.label.is_some()).collect();
    let mut bt = Tally::default();
    for v in &branch_level {
        bt.cq(v.status);
    }
    ctx.tally.holds += bt.holds;
    ctx.tally.fails += bt.fails;
    ctx.tally.unknown += bt.unknown;
    ctx.lines.push(Line::plain(
        1,
        format!(
            "branch verdicts: {} holds, {} fails, {} unknown",
            bt.holds, bt.fails, bt.unknown
        ),
    ));
    let bad: Vec<&cq::Arrow> = rel.arrows.iter().filter(|x| !x.consistent).collect();
    ctx.tally.inconsistent += bad.len();
    let tested = rel.arrows.iter().filter(|x| x.tested).count();
    ctx.lines.push(Line::plain(
        1,
        format!("{} relations, {} decided on both sides, {} inconsistent", rel.arrows.len(), tested, bad.len()),
    ));
    for x in bad {
        ctx.lines.push(Line::status(2, format!("violated: {}", x.id), Mark::Fails));
    }
    for c in &rel.converse {
        ctx.lines.push(Line::plain(2, format!("converse fails: {} ({})", c.arrow, c.note)));
    }
    ctx.put("relations", &rel);
    Ok(())
}

pub fn formulation_verdict(verdicts: &[CqVerdict], f: Formulation, which: Which) -> Option<&CqVerdict> {
    let kind = cq::CqKind::formulation_kind(f, which);
    verdicts.iter().find(|v| v.formulation == f && v.kind == kind && v.label.is_none())
}
