//! The `cutscene` command: serve the toolkit, replay a director run,
//! evaluate a trajectory and summarize many evaluations.

pub mod config;
pub mod evaluate;
pub mod replay;
pub mod report;
pub mod serve;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

pub use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "cutscene", version, about = "Headless cutscene authoring and evaluation")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expose the toolkit over JSON-RPC until stopped.
    Serve(serve::ServeArgs),
    /// Run the director on a scenario; writes trajectory.json and snapshot.json.
    Replay(replay::ReplayArgs),
    /// Score a trajectory and optional snapshot; writes the layer reports.
    Evaluate(evaluate::EvaluateArgs),
    /// Aggregate scores.json files into summary.csv and summary.md.
    Report(report::ReportArgs),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_GATE: u8 = 2;

pub fn run(cli: &Cli) -> Result<ExitCode> {
    cli.config.validate()?;
    match &cli.command {
        Command::Serve(args) => serve::run(&cli.config, args)?,
        Command::Replay(args) => replay::run(&cli.config, args)?,
        Command::Evaluate(args) => {
            if !evaluate::run(&cli.config, args)? {
                return Ok(ExitCode::from(EXIT_GATE));
            }
        }
        Command::Report(args) => report::run(&cli.config, args)?,
    }
    Ok(ExitCode::from(EXIT_OK))
}
