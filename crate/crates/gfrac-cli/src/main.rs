use std::process::ExitCode;

use clap::Parser;
use gfrac_cli::config::{Cli, RunConfig};
use gfrac_cli::error::CliResult;
use gfrac_cli::output::{emit, render, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let cfg = RunConfig::resolve(cli.flags)?;
    let outcome = gfrac_cli::run(cli.command, &cfg)?;
    emit(&render(&outcome, cfg.format)?, cfg.out.as_deref())?;
    if let Some(msg) = &outcome.message {
        eprintln!("{msg}");
    }
    Ok(ExitCode::from(match outcome.status {
        Status::Ok => 0,
        Status::Failed => 1,
        Status::NotConverged => 3,
    }))
}
