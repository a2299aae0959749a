//! `xi-ineq`: command-line driver for the verification suites.
//!
//! Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 a
//! numerical failure, 3 a usage error.

mod args;
mod commands;
mod report;
mod settings;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use report::{Report, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] xi_ineq::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

const USAGE: u8 = 3;

fn emit(report: &Report, format: Format, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let rc = match settings::resolve(cli.flags) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    };
    if let Some(n) = rc.flags.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(USAGE);
        }
    }
    let name = cli.command.name();
    let report = match commands::run(cli.command, &rc) {
        Ok(r) => r,
        Err(CliError::Core(e)) if e.is_numerical() => {
            let mut r = Report::new(name, Vec::new());
            r.flag(Status::Indeterminate, e.to_string());
            r
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    };
    if let Err(e) = emit(&report, rc.format(), rc.flags.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(Status::Indeterminate.exit_code());
    }
    eprintln!("{name}: {}", report.status.as_str());
    for d in &report.diagnostics {
        eprintln!("  {d}");
    }
    ExitCode::from(report.status.exit_code())
}
