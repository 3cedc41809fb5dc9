//! `harmony` — compute entanglement measures of small density matrices,
//! run Monte Carlo property campaigns, verify the closed-form entanglement
//! of formation against a decomposition search, and benchmark the
//! disharmony evaluation routes.
//!
//! Exit codes: 0 success, 1 usage, 2 parse error, 3 validation error,
//! 4 property violation.

mod commands;
mod io;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Validation(String),
    Property(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Property(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Validation(m) | CliError::Property(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "harmony", version, about = "Entanglement measures for 2- and 3-qubit density matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute harmony, concurrence, EoF and friends for a state file
    Compute(ComputeArgs),
    /// Monte Carlo campaigns checking the measure inequalities
    Sample(SampleArgs),
    /// Closed-form entanglement of formation vs decomposition search
    VerifyEof(VerifyEofArgs),
    /// Time the three disharmony routes on one batch
    Bench(BenchArgs),
    /// Write named states to state files
    Gen(GenArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Input state file (JSON)
    #[arg(long, short)]
    input: PathBuf,
    /// Report destination (default: stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Comma-separated subset of harmony,disharmony,concurrence,eof,purity,lambda
    #[arg(long, value_delimiter = ',')]
    measures: Option<Vec<String>>,
    /// Display entropies in bits instead of nats
    #[arg(long)]
    base2: bool,
    /// Validation tolerance for Hermiticity, trace and positivity
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    /// 2-qubit route agreement, envelope, dominance, Σλ and pure-state laws
    Properties,
    /// 3-qubit pure-state monogamy inequality
    Monogamy,
    /// 3-qubit mixed-state corollary H²_XY + H²_XZ ≤ 1
    Corollary,
}

#[derive(Args)]
struct SampleArgs {
    /// Campaign to run
    #[arg(long, value_enum)]
    check: CheckKind,
    /// Register size the campaign expects (2 for properties, 3 otherwise)
    #[arg(long, default_value_t = 2)]
    qubits: usize,
    /// Number of samples
    #[arg(long)]
    n: usize,
    /// Fix the sampled rank (default: cycle over every admissible rank)
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Slack allowed on the asserted inequalities
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Worker threads (results are identical regardless of the value)
    #[arg(long)]
    jobs: Option<usize>,
    /// Report destination (default: stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyEofArgs {
    /// Number of random states to verify
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Decomposition size K (must be ≥ the state rank)
    #[arg(long, default_value_t = 8)]
    k: usize,
    /// Random restarts per search
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verify this state file instead of random trials
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Report destination (default: stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Validation tolerance for the input file
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// Batch size
    #[arg(long)]
    n: usize,
    /// Timed repetitions of the batch (one warm-up discarded on top)
    #[arg(long, default_value_t = 5)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report destination (default: stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Output state file; `nonconvexity` derives three paths from it
    #[arg(long, short, global = true, default_value = "state.json")]
    output: PathBuf,
}

#[derive(Subcommand)]
enum GenKind {
    /// One of the four Bell states: phi+, phi-, psi+, psi-
    Bell { kind: String },
    /// GHZ state (|000⟩ + |111⟩)/√2
    Ghz,
    /// W state (|001⟩ + |010⟩ + |100⟩)/√3
    W,
    /// Bell-diagonal mixture with weights (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻)
    BellDiagonal {
        #[arg(num_args = 4)]
        p: Vec<f64>,
    },
    /// The non-convexity family at parameter x: writes ρ₊, ρ₋ and the mixture
    Nonconvexity { x: f64 },
    /// Random state: Haar pure (rank 1) or induced-measure mixed
    Random {
        #[arg(long, default_value_t = 2)]
        qubits: usize,
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };

    let result = match cli.command {
        Command::Compute(args) => commands::compute(args),
        Command::Sample(args) => commands::sample(args),
        Command::VerifyEof(args) => commands::verify_eof(args),
        Command::Bench(args) => commands::bench(args),
        Command::Gen(args) => commands::gen(args),
    };

    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
