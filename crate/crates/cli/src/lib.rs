//! Command-line front end: problem files, reports and the bundled corpus.

pub mod analysis;
pub mod args;
pub mod commands;
pub mod corpus;
pub mod problem;
pub mod report;
pub mod style;

pub use args::Cli;
pub use commands::{resolve_problem, run, select_points, CliError};
pub use problem::{load_problem, parse_problem, Point, Problem, ProblemError, ProblemFile};
pub use report::Output;

use std::io::Write;

/// Exit code for usage errors, unreadable input and failed rechecks.
pub const EXIT_INPUT: i32 = 3;

fn json_text(o: &Output) -> String {
    let mut s = serde_json::to_string_pretty(&o.json).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs a parsed command line, prints the result and returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let out = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, json_text(&out)) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INPUT;
        }
    }
    let text = if cli.json {
        json_text(&out)
    } else {
        style::render(&out.lines, style::color_enabled())
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return EXIT_INPUT;
    }
    out.exit_code
}
