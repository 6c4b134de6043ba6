//! Problem files: JSON with rationals as strings (integers may be bare numbers).

use anf_core::{eval, AbsNormalProgram, QuadraticFunc, SignatureVector};
use cq::TangentAnnotations;
use ratmath::rational::serde_rational;
use ratmath::{format_vec, parse_rational, PolyCone, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exact rational read from `"3"`, `"-2/7"`, `"0.5"` or a bare JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Num(#[serde(with = "serde_rational")] pub Rational);

/// Monomial key (`"1"`, `"t2"`, `"z1"`, `"t1*z1"`, `"t1^2"`) to coefficient.
pub type Terms = BTreeMap<String, Num>;

fn default_smoothness() -> u32 {
    1
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub n_t: usize,
    pub s: usize,
    pub m1: usize,
    pub m2: usize,
    #[serde(default = "default_smoothness")]
    pub smoothness: u32,
    pub objective: Terms,
    #[serde(rename = "cE", default)]
    pub c_e: Vec<Terms>,
    #[serde(rename = "cI", default)]
    pub c_i: Vec<Terms>,
    #[serde(rename = "cZ", default)]
    pub c_z: Vec<Terms>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub name: String,
    pub t: Vec<Num>,
    /// Known local minimizer.
    #[serde(default, skip_serializing_if = "is_false")]
    pub minimizer: bool,
    /// 1-based inequality indices whose slack takes the negative sign.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negate_slack: Vec<usize>,
    /// Trusted tangent cones keyed by definite signature (`"+-"`), pieces over `(δt, δz̃)`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub annotations: BTreeMap<String, Vec<PieceSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    #[serde(default)]
    pub eq: Vec<Vec<Num>>,
    #[serde(default)]
    pub ineq: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Holds => "holds",
            Expected::Fails => "fails",
            Expected::Unknown => "unknown",
        })
    }
}

/// Hand-derived verdicts for a point. CQ entries refer to the program itself (I-NLP) and its
/// counterpart MPCC (I-MPCC); `M` and `B` to the abs-normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(rename = "AKQ", default, skip_serializing_if = "Option::is_none")]
    pub akq: Option<Expected>,
    #[serde(rename = "GKQ", default, skip_serializing_if = "Option::is_none")]
    pub gkq: Option<Expected>,
    #[serde(rename = "MPCC-ACQ", default, skip_serializing_if = "Option::is_none")]
    pub mpcc_acq: Option<Expected>,
    #[serde(rename = "MPCC-GCQ", default, skip_serializing_if = "Option::is_none")]
    pub mpcc_gcq: Option<Expected>,
    /// Every formulation-level and branch-level verdict of all four formulations.
    #[serde(rename = "all-cq", default, skip_serializing_if = "Option::is_none")]
    pub all_cq: Option<Expected>,
    /// Direction over `(δt, δz̃)` expected as the AKQ witness.
    #[serde(rename = "AKQ-witness", default, skip_serializing_if = "Option::is_none")]
    pub akq_witness: Option<Vec<Num>>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Expected>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Expected>,
}

/// A point with everything resolved against the program.
#[derive(Debug, Clone)]
pub struct Point {
    pub name: String,
    pub t: Vec<Rational>,
    pub minimizer: bool,
    /// One flag per inequality.
    pub negate: Vec<bool>,
    pub annotations: TangentAnnotations,
    pub expect: Expect,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub program: AbsNormalProgram,
    pub points: Vec<Point>,
    /// Hex SHA-256 of the canonical re-serialization of `file`.
    pub digest: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("{origin}: line {line}, column {column}: {message}")]
    Syntax { origin: String, line: usize, column: usize, message: String },
    #[error("{origin}: {path}: {message}")]
    Invalid { origin: String, path: String, message: String },
}

struct Ctx<'a> {
    origin: &'a str,
}

impl Ctx<'_> {
    fn err(&self, path: impl Into<String>, message: impl Into<String>) -> ProblemError {
        ProblemError::Invalid {
            origin: self.origin.to_string(),
            path: path.into(),
            message: message.into(),
        }
    }
}

pub fn parse_problem(text: &str, origin: &str) -> Result<Problem, ProblemError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| ProblemError::Syntax {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: {
            let m = e.to_string();
            m.rsplit_once(" at line ").map_or(m.clone(), |(head, _)| head.to_string())
        },
    })?;
    build(file, origin)
}

pub fn load_problem(path: &std::path::Path) -> Result<Problem, ProblemError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ProblemError::Invalid {
        origin: origin.clone(),
        path: "$".into(),
        message: e.to_string(),
    })?;
    parse_problem(&text, &origin)
}

fn func(ctx: &Ctx, path: &str, terms: &Terms, n_t: usize, s: usize) -> Result<QuadraticFunc, ProblemError> {
    QuadraticFunc::from_monomials(n_t, s, terms.iter().map(|(k, v)| (k.as_str(), v.0.clone()))).map_err(|m| ctx.err(path, m))
}

fn family(ctx: &Ctx, name: &str, list: &[Terms], expected: usize, n_t: usize, s: usize) -> Result<Vec<QuadraticFunc>, ProblemError> {
    if list.len() != expected {
        return Err(ctx.err(format!("$.{name}"), format!("{} components, expected {expected}", list.len())));
    }
    list.iter()
        .enumerate()
        .map(|(i, t)| func(ctx, &format!("$.{name}[{i}]"), t, n_t, s))
        .collect()
}

fn nums(v: &[Num]) -> Vec<Rational> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn rows(ctx: &Ctx, path: &str, rs: &[Vec<Num>], width: usize) -> Result<Vec<Vec<Rational>>, ProblemError> {
    rs.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != width {
                return Err(ctx.err(format!("{path}[{i}]"), format!("{} entries, expected {width}", r.len())));
            }
            Ok(nums(r))
        })
        .collect()
}

fn build(file: ProblemFile, origin: &str) -> Result<Problem, ProblemError> {
    let ctx = Ctx { origin };
    let (n_t, s) = (file.n_t, file.s);
    let program = AbsNormalProgram {
        n_t,
        s,
        f: func(&ctx, "$.objective", &file.objective, n_t, 0)?,
        c_e: family(&ctx, "cE", &file.c_e, file.m1, n_t, s)?,
        c_i: family(&ctx, "cI", &file.c_i, file.m2, n_t, s)?,
        c_z: family(&ctx, "cZ", &file.c_z, s, n_t, s)?,
        smoothness: file.smoothness,
    };
    let report = program.validate();
    if !report.is_valid() {
        return Err(ctx.err("$", report.to_string()));
    }
    let mut names = std::collections::BTreeSet::new();
    let mut points = Vec::new();
    for (k, spec) in file.points.iter().enumerate() {
        let path = format!("$.points[{k}]");
        if !names.insert(spec.name.clone()) {
            return Err(ctx.err(&path, format!("duplicate point name '{}'", spec.name)));
        }
        points.push(resolve_point(&ctx, &path, &program, spec)?);
    }
    let canonical = serde_json::to_vec(&file).expect("problem files serialize");
    let digest = hex::encode(Sha256::digest(&canonical));
    Ok(Problem {
        file,
        program,
        points,
        digest,
    })
}

fn resolve_point(ctx: &Ctx, path: &str, p: &AbsNormalProgram, spec: &PointSpec) -> Result<Point, ProblemError> {
    if spec.t.len() != p.n_t {
        return Err(ctx.err(format!("{path}.t"), format!("{} entries, expected n_t = {}", spec.t.len(), p.n_t)));
    }
    let t = nums(&spec.t);
    let mut negate = vec![false; p.m2()];
    for (j, &k) in spec.negate_slack.iter().enumerate() {
        if k == 0 || k > p.m2() {
            return Err(ctx.err(format!("{path}.negate_slack[{j}]"), format!("index {k} outside 1..={}", p.m2())));
        }
        negate[k - 1] = true;
    }
    let mut annotations = TangentAnnotations::none();
    if !spec.annotations.is_empty() {
        let e = eval(p, &t).map_err(|e| ctx.err(format!("{path}.t"), e.to_string()))?;
        for (key, pieces) in &spec.annotations {
            let apath = format!("{path}.annotations[\"{key}\"]");
            let sigma = SignatureVector::parse(key.strip_prefix("σ=").unwrap_or(key))
                .ok_or_else(|| ctx.err(&apath, "signature must consist of '+' and '-'"))?;
            if sigma.len() != p.s {
                return Err(ctx.err(&apath, format!("signature has {} entries, expected s = {}", sigma.len(), p.s)));
            }
            if !sigma.is_definite() || !sigma.succeq(&e.sigma) {
                return Err(ctx.err(
                    &apath,
                    format!("σ={sigma} is not a branch at t = {} (signature {})", format_vec(&t), e.sigma),
                ));
            }
            let width = p.block();
            let mut cones = Vec::new();
            for (j, piece) in pieces.iter().enumerate() {
                let ppath = format!("{apath}[{j}]");
                let eq = rows(ctx, &format!("{ppath}.eq"), &piece.eq, width)?;
                let ineq = rows(ctx, &format!("{ppath}.ineq"), &piece.ineq, width)?;
                cones.push(PolyCone::from_rows(width, eq, ineq));
            }
            annotations.pieces.insert(sigma, cones);
        }
    }
    Ok(Point {
        name: spec.name.clone(),
        t,
        minimizer: spec.minimizer,
        negate,
        annotations,
        expect: spec.expect.clone().unwrap_or_default(),
    })
}

/// Parses `"0,1/2,-3"` into a point.
pub fn parse_point_arg(s: &str) -> Result<Vec<Rational>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| parse_rational(x.trim()).map_err(|e| e.to_string()))
        .collect()
}

/// Re-encodes a program in problem-file form without points.
pub fn program_to_file(name: &str, description: &str, p: &AbsNormalProgram) -> ProblemFile {
    let terms = |q: &QuadraticFunc, n_t: usize| -> Terms { q.to_monomials(n_t).into_iter().map(|(k, v)| (k, Num(v))).collect() };
    ProblemFile {
        name: name.to_string(),
        description: description.to_string(),
        n_t: p.n_t,
        s: p.s,
        m1: p.m1(),
        m2: p.m2(),
        smoothness: p.smoothness,
        objective: terms(&p.f, p.n_t),
        c_e: p.c_e.iter().map(|q| terms(q, p.n_t)).collect(),
        c_i: p.c_i.iter().map(|q| terms(q, p.n_t)).collect(),
        c_z: p.c_z.iter().map(|q| terms(q, p.n_t)).collect(),
        points: Vec::new(),
    }
}
