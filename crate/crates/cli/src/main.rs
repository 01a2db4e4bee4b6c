use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use morrey_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match run(&cli, &mut std::io::stdin().lock()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(e) = emit(&report, &mut std::io::stdout().lock()) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    if !report.summary.is_empty() {
        let _ = std::io::stderr().write_all(report.summary.as_bytes());
    }
    ExitCode::from(report.status)
}
