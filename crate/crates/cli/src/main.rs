//! Command-line front end for the mass-operator toolkit.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Symbolic and numeric checks for Fock-space mass operators.
#[derive(Debug, Parser)]
#[command(name = "massop", version)]
pub struct Cli {
    /// Emit JSON instead of aligned text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Momentum dimension (default 3 for symbolic commands, 1 for numeric ones).
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub dim: Option<u8>,
    /// Species count for symbolic commands.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=9))]
    pub species: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    U,
    Sp2n,
    Deriv,
    Osc,
    Jacobi,
    Poincare,
    Higher,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentOf {
    #[value(name = "M")]
    M,
    #[value(name = "M2")]
    M2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal-order an expression.
    No { expr: String },
    /// Normal-ordered commutator [e1, e2].
    Comm { e1: String, e2: String },
    /// Normal-ordered anticommutator {e1, e2}.
    Anti { e1: String, e2: String },
    /// Run a relation suite; exit 1 if any relation fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Species count (u, sp2n, deriv, osc), sample count (jacobi) or product order (higher).
        #[arg(long)]
        n: Option<usize>,
        /// Seed for the sampled jacobi suite.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Build the multi-species representation on a grid and test irreducibility.
    Triplet {
        #[arg(long, value_delimiter = ',', required = true)]
        masses: Vec<f64>,
        /// Points per axis.
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long, default_value_t = 1.0)]
        profile_sigma: f64,
    },
    /// Evolve a block state under the square-root Hamiltonian.
    Evolve {
        #[arg(long, value_delimiter = ',', required = true)]
        masses: Vec<f64>,
        #[arg(long)]
        t: f64,
        /// State snapshot: inline JSON or a file path.
        #[arg(long)]
        state: String,
        #[arg(long)]
        doubled: bool,
    },
    /// Least-squares fit of a mass formula to a particle table.
    Fit {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Exact coefficients from three masses and their quantum numbers.
    SolveTriplet {
        /// Masses (decimals or p/q); squared unless the formula targets M.
        #[arg(long, value_delimiter = ',', required = true)]
        masses: Vec<String>,
        /// Three groups separated by `;`, e.g. `Y=1,J=1/2;Y=0,J=1;Y=-1,J=1/2`.
        #[arg(long)]
        qnums: String,
        #[arg(long, default_value = "triplet-linear")]
        formula: String,
        /// Treat --masses as already squared.
        #[arg(long)]
        squared: bool,
    },
    /// Single generator for commuting diagonal operators.
    Vn {
        /// JSON list of diagonals (inline or file path).
        #[arg(long)]
        ops: String,
    },
    /// κ = ±mλ for each block.
    Kappa {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        masses: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        lambdas: Vec<String>,
    },
    /// Moment of M or M² under a mass measure.
    Smear {
        /// Measure JSON (inline or file path).
        #[arg(long)]
        measure: String,
        #[arg(long)]
        moment: u32,
        #[arg(long, value_enum, default_value = "M")]
        of: MomentOf,
        /// Rescale the measure to total mass 1.
        #[arg(long)]
        normalize: bool,
    },
    /// Seeded samples from a mass measure.
    Sample {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long)]
        normalize: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&out.json).expect("serializable report"))
            } else {
                out.text
            };
            // A closed pipe (e.g. `| head`) is not an error for a report writer.
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
