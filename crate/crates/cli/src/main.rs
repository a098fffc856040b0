use std::fmt;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod model;
mod plot;

use args::{Cli, Command};
use commands::Report;

/// Bad flag values or combinations. Exits with status 2, like clap's own
/// parse errors.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_WARNINGS: u8 = 3;

fn init_pool(jobs: Option<usize>) -> anyhow::Result<()> {
    match jobs {
        Some(0) => Err(UsageError("--jobs: must be >= 1".into()).into()),
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
            Ok(())
        }
        None => Ok(()),
    }
}

fn finish(report: Report, strict: bool) -> ExitCode {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.warnings.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{} numerical warning(s)", report.warnings.len());
        if strict {
            ExitCode::from(EXIT_WARNINGS)
        } else {
            ExitCode::SUCCESS
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Traj(a) => {
            let a = a.with_config_file()?;
            init_pool(a.jobs)?;
            Ok(finish(commands::traj(&a)?, a.strict))
        }
        Command::Nonmark(a) => {
            let a = a.with_config_file()?;
            init_pool(a.jobs)?;
            Ok(finish(commands::nonmark(&a)?, a.strict))
        }
        Command::Qsl(a) => {
            let a = a.with_config_file()?;
            init_pool(a.jobs)?;
            Ok(finish(commands::qsl(&a)?, a.strict))
        }
        Command::Validate(a) => {
            let (ok, report) = commands::validate(&a)?;
            let code = finish(report, a.strict);
            if ok {
                Ok(code)
            } else {
                eprintln!("validation failed: an Ohmic case exceeds 1e-6");
                Ok(ExitCode::from(EXIT_FAILURE))
            }
        }
        Command::Calibrate(a) => {
            init_pool(a.jobs)?;
            Ok(finish(commands::run_calibrate(&a)?, false))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<UsageError>() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
    }
}
