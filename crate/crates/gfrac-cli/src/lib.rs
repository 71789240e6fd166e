//! Library half of the `gfrac` binary: configuration, output formatting and the subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use config::{Command, RunConfig};
use error::CliResult;
use output::Outcome;

pub fn run(command: Command, cfg: &RunConfig) -> CliResult<Outcome> {
    match command {
        Command::Eval => commands::eval::run(cfg),
        Command::GapCompare => commands::gap::run(cfg),
        Command::SchurPerturb => commands::schur::run(cfg),
        Command::MapImage => commands::map_image::run(cfg),
        Command::Verify => commands::verify::run(cfg),
        Command::MomentCheck => commands::moment::run(cfg),
    }
}
