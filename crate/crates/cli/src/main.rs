//! `entmono`: command-line front end for entmono-core.
//!
//! Every command prints a JSON report on stdout. Exit codes: 0 when all requested checks
//! pass, 1 when a check fails, 2 for invalid input.

mod commands;
mod fixtures;
mod report;
mod statefile;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] entmono_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Parser, Debug)]
#[command(name = "entmono", version, about = "Entanglement monotones from pure-state LOCC conversion")]
pub struct Cli {
    /// Worker threads for solver restarts (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall time in the report (makes reports differ between runs).
    #[arg(long, global = true)]
    timing: bool,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Pure-state monotone: entropy, concurrence or avg_e.
    #[arg(long)]
    monotone: String,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    /// Random seed; falls back to $ENTMONO_SEED, then 0.
    #[arg(long, env = "ENTMONO_SEED", default_value_t = 0)]
    seed: u64,
    /// Ensemble size m (default r^2, at most r^2 + 4).
    #[arg(long)]
    cardinality: Option<usize>,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Schmidt vector of a pure state.
    Schmidt { statefile: PathBuf },
    /// Least monotone value over pure states convertible into the state.
    Ef {
        statefile: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Convex roof of the monotone.
    Roof {
        statefile: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Both solvers and their gap.
    Compare {
        statefile: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Closed-form value for eta |phi0><phi0| + (1 - eta) |33><33|.
    Theorem4 {
        #[arg(long)]
        eta: f64,
        /// |c1|^2; amplitudes are taken real.
        #[arg(long)]
        c1sq: f64,
        #[arg(long)]
        monotone: String,
        /// Also run the EF solver and check agreement within 2e-3.
        #[arg(long)]
        verify: bool,
        #[arg(long, env = "ENTMONO_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Wootters concurrence of a two-qubit state.
    Wootters { statefile: PathBuf },
    /// Strong-monotonicity check under random one-sided channels.
    LoccTest {
        statefile: PathBuf,
        #[arg(long)]
        monotone: String,
        #[arg(long, default_value_t = 10)]
        channels: usize,
        /// Kraus operators per channel.
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        #[arg(long, env = "ENTMONO_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// Write the standard fixture files into a directory.
    Fixtures {
        dir: PathBuf,
        #[arg(long, env = "ENTMONO_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match commands::run(&cli.command) {
        Ok(mut report) => {
            report.args = argv.into_iter().skip(1).collect();
            if cli.timing {
                report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let text = report.to_json();
            println!("{text}");
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
