use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "anfcheck",
    version,
    about = "Exact checks of kink qualifications, MPCC constraint qualifications and stationarity for abs-normal NLPs",
    after_help = "Exit codes: 0 all holds/consistent, 1 some check fails, 2 some check undecided, 3 usage or input error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Re-validate every certificate in the report before emitting it.
    #[arg(long, global = true)]
    pub recheck: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Target {
    /// Problem file. Names of bundled corpus problems (E1.json ... E5.json) also work.
    pub problem: PathBuf,
    /// Point name from the file or comma-separated coordinates (`0,1/2`). Defaults to every point in the file.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// 1-based inequality indices whose slack takes the negative sign (`1,3`).
    #[arg(long, value_name = "INDICES")]
    pub negate_slack: Option<String>,
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = true, multiple = false)]
pub struct ReformulationKind {
    /// Slack reformulation as a problem file.
    #[arg(long)]
    pub slack: bool,
    /// Counterpart MPCC.
    #[arg(long)]
    pub mpcc: bool,
    /// Counterpart MPCC of the slack reformulation.
    #[arg(long)]
    pub slack_mpcc: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Anf,
    Mpcc,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Switching values, signature, kinks and active inequalities.
    Eval(Target),
    /// Branch problems of all four formulations.
    Branches(Target),
    /// Slack reformulation, counterpart MPCC, or the MPCC of the slack form.
    Reformulate {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        kind: ReformulationKind,
    },
    /// Linearized and tangent cones per formulation and branch.
    Cones {
        #[command(flatten)]
        target: Target,
        /// Include dual cones.
        #[arg(long)]
        dual: bool,
    },
    /// Constraint qualifications. Without a selector every formulation-level check runs.
    CheckCq {
        #[command(flatten)]
        target: Target,
        /// AKQ, GKQ, MPCC-ACQ and MPCC-GCQ for all four formulations.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        akq: bool,
        #[arg(long)]
        gkq: bool,
        #[arg(long)]
        mpcc_acq: bool,
        #[arg(long)]
        mpcc_gcq: bool,
        /// Branch ACQ and GCQ for every branch of every formulation.
        #[arg(long)]
        branches: bool,
    },
    /// M- and B-stationarity. Without a selector both run.
    CheckStationarity {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        m: bool,
        #[arg(long)]
        b: bool,
        /// Restrict to one form; both by default.
        #[arg(long, value_enum)]
        form: Option<FormArg>,
    },
    /// Every proved relation between the formulation and branch verdicts.
    VerifyRelations(Target),
    /// The bundled corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CorpusAction {
    /// Check every corpus point against its hand-derived expectations.
    Run,
}
