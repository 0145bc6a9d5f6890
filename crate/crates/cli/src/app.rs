//! Argument parsing and dispatch for the `esdsim` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use crate::commands::{self, scalar};
use crate::csv::write_records;
use crate::presets::{self, Figure};
use crate::scenario::{parse_scenario, ScenarioFile};

#[derive(Parser)]
#[command(
    name = "esdsim",
    version,
    about = "Entanglement sudden death and local-filter retrieval"
)]
pub struct Cli {
    /// Write output here instead of the scenario's `output` or stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Write a preset sweep (fig2 or fig5) as CSV.
    Reproduce { figure: Figure },
    /// Run the sweep described by a scenario file.
    Sweep { file: PathBuf },
    /// Print the damping at which a measure first vanishes.
    Threshold {
        file: PathBuf,
        #[arg(long)]
        measure: String,
    },
    /// Print the filter strength equalizing two measures.
    SolveKappa {
        file: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// W-state retrieval table for N up to `n` and k up to `k`.
    Scaling {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Check whether filtering revives any dead GHZ concurrence.
    GhzCheck {
        #[arg(long)]
        n: usize,
    },
}

fn load(path: &Path) -> Result<ScenarioFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("in {}", path.display()))
}

fn emit(stdout: &mut dyn Write, text: &str, target: Option<&Path>) -> Result<()> {
    match target {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

/// Runs one command. Results go to `stdout` unless redirected to a file;
/// progress notes go to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Reproduce { figure } => {
            let path = out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from(figure.default_output()));
            let records = presets::records(figure)?;
            emit(stdout, &write_records(&records)?, Some(&path))?;
            writeln!(stderr, "wrote {} rows to {}", records.len(), path.display())?;
        }
        Command::Sweep { file } => {
            let scenario = load(&file)?;
            let csv = write_records(&commands::sweep(&scenario)?)?;
            emit(stdout, &csv, out.or(scenario.output.as_deref()))?;
        }
        Command::Threshold { file, measure } => {
            let scenario = load(&file)?;
            let text = match commands::threshold(&scenario, &measure)? {
                Some(g) => scalar(g),
                None => "none".to_string(),
            };
            emit(stdout, &format!("{text}\n"), out.or(scenario.output.as_deref()))?;
        }
        Command::SolveKappa { file, lhs, rhs } => {
            let scenario = load(&file)?;
            let sol = commands::solve_kappa(&scenario, &lhs, &rhs)?;
            emit(
                stdout,
                &format!("{}\n", scalar(sol.kappa)),
                out.or(scenario.output.as_deref()),
            )?;
            writeln!(
                stderr,
                "{lhs} = {}, {rhs} = {}, prob = {}",
                scalar(sol.lhs_value),
                scalar(sol.rhs_value),
                scalar(sol.success_prob)
            )?;
        }
        Command::Scaling { n, k } => emit(stdout, &commands::scaling(n, k)?, out)?,
        Command::GhzCheck { n } => emit(stdout, &commands::ghz_report_text(&commands::ghz_check(n)?), out)?,
    }
    Ok(())
}
