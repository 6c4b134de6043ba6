use anf_core::{EvalResult, SignatureVector};
use ratmath::rational::serde_rational_vec;
use ratmath::Rational;
use serde::Serialize;
use serde_json::{Map, Value};

pub const TOOL: &str = "anfcheck";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How a text line is colored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Holds,
    Fails,
    Unknown,
    Heading,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub depth: usize,
    pub text: String,
    /// Status word printed after the text.
    pub mark: Option<Mark>,
}

impl Line {
    pub fn plain(depth: usize, text: impl Into<String>) -> Line {
        Line {
            depth,
            text: text.into(),
            mark: None,
        }
    }

    pub fn status(depth: usize, text: impl Into<String>, mark: Mark) -> Line {
        Line {
            depth,
            text: text.into(),
            mark: Some(mark),
        }
    }

    pub fn heading(text: impl Into<String>) -> Line {
        Line::status(0, text, Mark::Heading)
    }
}

/// Verdict counts that decide the exit code.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
    pub unknown: usize,
    pub inconsistent: usize,
}

impl Tally {
    pub fn cq(&mut self, s: cq::Status) -> Mark {
        match s {
            cq::Status::Holds => {
                self.holds += 1;
                Mark::Holds
            }
            cq::Status::Fails => {
                self.fails += 1;
                Mark::Fails
            }
            cq::Status::Unknown => {
                self.unknown += 1;
                Mark::Unknown
            }
        }
    }

    pub fn stat(&mut self, s: stationarity::Status) -> Mark {
        match s {
            stationarity::Status::Holds => self.cq(cq::Status::Holds),
            stationarity::Status::Fails => self.cq(cq::Status::Fails),
        }
    }

    /// 1 if anything fails or a relation is violated, else 2 if anything is undecided, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.fails > 0 || self.inconsistent > 0 {
            1
        } else if self.unknown > 0 {
            2
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProblemInfo {
    pub name: String,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalSummary {
    #[serde(with = "serde_rational_vec")]
    pub z: Vec<Rational>,
    pub sigma: SignatureVector,
    /// 1-based kink indices.
    pub kinks: Vec<usize>,
    /// 1-based active inequality indices.
    pub active_inequalities: Vec<usize>,
    #[serde(with = "serde_rational_vec")]
    pub equality_residuals: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub inequality_values: Vec<Rational>,
    pub feasible: bool,
}

impl EvalSummary {
    pub fn of(e: &EvalResult) -> EvalSummary {
        EvalSummary {
            z: e.z.clone(),
            sigma: e.sigma.clone(),
            kinks: e.alpha.iter().map(|i| i + 1).collect(),
            active_inequalities: e.active_i.iter().map(|i| i + 1).collect(),
            equality_residuals: e.residual_e.clone(),
            inequality_values: e.value_i.clone(),
            feasible: e.is_feasible(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub name: String,
    #[serde(with = "serde_rational_vec")]
    pub t: Vec<Rational>,
    pub eval: EvalSummary,
    #[serde(flatten)]
    pub body: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    #[serde(flatten)]
    pub tally: Tally,
    /// Present when certificates were re-validated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recheck: Option<String>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub problem: ProblemInfo,
    /// Derived programs (reformulations).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived: Option<Value>,
    pub points: Vec<PointReport>,
    pub summary: Summary,
}

/// Everything a command produces.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub lines: Vec<Line>,
    pub exit_code: i32,
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}
