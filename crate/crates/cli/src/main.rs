use anfcheck::{execute, Cli, EXIT_INPUT};
use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            std::process::exit(if informational { 0 } else { EXIT_INPUT });
        }
    };
    std::process::exit(execute(&cli));
}
