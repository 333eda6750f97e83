//! `holonomic`: synthesize and verify holonomic gates from the command line.
//!
//! Reports are JSON with floats rounded to 12 significant digits, so equal
//! inputs and seeds give byte-identical files. Exit status is 0 on success,
//! 1 when a check fails and 2 on invalid input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
}

impl From<holonomic_core::Error> for CliError {
    fn from(e: holonomic_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

/// Whether every hard check in a command passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    CheckFailed,
}

#[derive(Parser, Debug)]
#[command(
    name = "holonomic",
    version,
    about = "Holonomic gate synthesis via dynamical invariants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON input (loop sequence, synthesis problem or entangler search).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Where to write the JSON report; stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Time samples per segment for eigenframe quadrature and residual scans.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Worker threads for restarts and RB sequences.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Depolarizing strength per Clifford and per target gate.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub noise_eps: f64,
    /// Comma-separated Clifford counts.
    #[arg(long, global = true, value_delimiter = ',')]
    pub m_values: Option<Vec<usize>>,
    /// Random sequences per Clifford count.
    #[arg(long, global = true)]
    pub n_seq: Option<usize>,
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Weight of the Σ|γ^d| penalty in the synthesis objective.
    #[arg(long, global = true)]
    pub penalty: Option<f64>,
    /// Named gate to characterize (I, X, H, P, T, CNOT).
    #[arg(long, global = true)]
    pub gate: Option<String>,
    /// Named target for fidelity comparisons and synthesis.
    #[arg(long, global = true)]
    pub target: Option<String>,
    /// Number of loops when synthesizing from --target.
    #[arg(long, global = true)]
    pub loops: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Check the invariant identity and the DI equation along each segment.
    VerifyDi,
    /// Berry, dynamical and total phases of each segment.
    Phases,
    /// Optimize loop parameters for a target gate.
    Synth,
    /// Propagate a loop sequence and compare with a target.
    Gate,
    /// Search for a single-loop two-qubit entangler.
    Entangle,
    /// Simulated Pauli-basis process tomography.
    Qpt,
    /// Reference and interleaved randomized benchmarking.
    Rb,
    /// Verify the bundled reference parameter tables.
    Tables,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("invalid input: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("could not size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
