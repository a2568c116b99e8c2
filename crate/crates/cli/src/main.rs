//! `infocus`: in-focus and out-focus analysis of a group within a context.
//!
//! Exit status is 0 on success, 2 for input or usage errors and 3 when the
//! geometry is degenerate (coincident centroids, zero context inertia).

// `!(x > 0.0)` is used on purpose so that NaN takes the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod input;
mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use commands::{AnalyzeArgs, MdsArgs, MetacontrastArgs, ProfileArgs};
use render::FloatFormat;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] infocus_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_geometric() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "infocus", version, about)]
struct Cli {
    /// Float formatting for every number written.
    #[arg(long, value_enum, global = true, default_value = "shortest")]
    floats: FloatFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Focal points, relative dispersions and polarization ratio as JSON.
    Analyze(AnalyzeArgs),
    /// Classical MDS coordinates (TSV) or eigen-summary (JSON).
    Mds(MdsArgs),
    /// Relative dispersion along the centroid line, with the two foci marked.
    Profile(ProfileArgs),
    /// Local minima of the meta-contrast prototypicality function on 1-D data.
    Metacontrast(MetacontrastArgs),
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a, cli.floats),
        Command::Mds(a) => commands::mds(a, cli.floats),
        Command::Profile(a) => commands::profile(a, cli.floats),
        Command::Metacontrast(a) => commands::metacontrast(a, cli.floats),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let mut out = io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("infocus: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
