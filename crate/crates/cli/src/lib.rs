//! Command-line front end for `gsw-core`: configured solver runs, `α`-continuation,
//! zero-set analysis of snapshots and the built-in property suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::check::CheckSettings;
use crate::error::{CliError, CliResult, Exit};

#[derive(Debug, Parser)]
#[command(name = "gsw", version, about = "Lattice Seiberg-Witten solver with n spinors")]
pub struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory, overriding `[output] dir`.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed, overriding `seed` in the configuration.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Suppress progress output.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve at the first rung of the schedule.
    Solve,
    /// Run the whole schedule, warm-starting each rung.
    Continue,
    /// Analyze the zero set of a snapshot.
    Analyze {
        snapshot: PathBuf,
    },
    /// Run the property suite.
    Check {
        #[arg(long, hide = true)]
        perturb_moment_map: bool,
    },
}

fn resolved(cli: &Cli) -> CliResult<config::ResolvedRun> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("--config PATH is required for this command"))?;
    config::resolve(config::load(path)?, cli.seed, cli.out.clone())
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Solve => commands::solve(&resolved(cli)?, cli.quiet),
        Command::Continue => commands::continuation(&resolved(cli)?, cli.quiet),
        Command::Analyze { snapshot } => {
            let analysis = match &cli.config {
                Some(path) => config::load_analysis(path)?,
                None => config::AnalysisConfig::default(),
            };
            commands::analyze(snapshot, &analysis, cli.out.clone(), cli.quiet).map(|_| ())
        }
        Command::Check { perturb_moment_map } => {
            let mut settings = CheckSettings { perturb_moment_map: *perturb_moment_map, ..CheckSettings::default() };
            if let Some(seed) = cli.seed {
                settings.seed = seed;
            }
            commands::check(&settings, cli.quiet)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Exit::Ok.code();
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("ERROR: {}", first.trim_start_matches("error: "));
            return Exit::InvalidConfig.code();
        }
    };
    match execute(&cli) {
        Ok(()) => Exit::Ok.code(),
        Err(e) => {
            eprintln!("ERROR: {e}");
            e.exit.code()
        }
    }
}
