use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "usg",
    version,
    about = "Solve unit-sphere games",
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Convergence tolerance for iterative solvers and the verifier.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Iteration cap for iterative solvers.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Seed for random starts and generated games.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the JSON result (or generated game) to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find equilibria of a two-player game (power iteration if positive, eigen-enumeration otherwise).
    Solve {
        game: PathBuf,
        /// Independent random positive starts for positive games, run in parallel.
        #[arg(long, default_value_t = 1)]
        starts: usize,
    },
    /// Real eigenpairs of AB and the existence verdict.
    Spectrum { game: PathBuf },
    /// Run Cournot best-response dynamics.
    Learn {
        game: PathBuf,
        /// Round cap (overrides --max-iter).
        #[arg(long)]
        rounds: Option<usize>,
        /// Write the per-round trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Start from a seeded random positive profile instead of the uniform one.
        #[arg(long)]
        random_start: bool,
    },
    /// Approximate mixed equilibrium of the underlying bimatrix game.
    Approx { game: PathBuf },
    /// Multiplayer games.
    Multi {
        #[command(subcommand)]
        command: MultiCommand,
    },
    /// Re-verify the equilibria stored in a result file.
    Verify { result: PathBuf },
    /// Generate a seeded random game file.
    Gen(GenArgs),
}

#[derive(Debug, Subcommand)]
pub enum MultiCommand {
    /// Solve with SS-HOPM, Markov Cournot play or fixed-point iteration, whichever applies.
    Solve {
        game: PathBuf,
        /// Write the per-round L1 trace as CSV (Markov and fixed-point methods).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Uniform01,
    UniformPositive,
    Markov,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Action counts, e.g. `3x3` for two players or `2x2x2` for three.
    #[arg(long)]
    pub shape: String,
    #[arg(long, value_enum, default_value_t = Dist::UniformPositive)]
    pub dist: Dist,
    /// Lower bound for uniform-positive entries.
    #[arg(long, default_value_t = 0.1)]
    pub lo: f64,
    /// Upper bound for uniform-positive entries.
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
    /// Store a two-action-count shape as a multi_player tensor file.
    #[arg(long)]
    pub tensor: bool,
    #[arg(long)]
    pub name: Option<String>,
}
