use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permajones::jones::Route;
use permajones::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "permajones", version, about = "Jones polynomials via matrix permanents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the Jones polynomial of a braid closure.
    Jones(JonesArgs),
    /// Print the blown-up matrix of a braid closure.
    Matrix(MatrixArgs),
    /// Estimate a permanent (and |J(q0)|) by random signed determinants.
    Estimate(EstimateArgs),
    /// Check the gadgets, weight identities and route agreement.
    Selftest(SelftestArgs),
    /// Time the numeric Ryser engine and the exact trefoil pipeline.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct BraidSource {
    /// Braid word, e.g. "2: 1 1 1".
    #[arg(conflicts_with = "file")]
    pub braid: Option<String>,

    /// Read the braid word from a file instead.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteArg {
    Permanent,
    Statesum,
    Skein,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Permanent => Route::Permanent,
            RouteArg::Statesum => Route::StateSum,
            RouteArg::Skein => Route::Skein,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

#[derive(Args, Debug)]
pub struct JonesArgs {
    #[command(flatten)]
    pub source: BraidSource,

    #[arg(long, value_enum, default_value = "permanent")]
    pub route: RouteArg,

    /// Run all three routes and fail if they disagree.
    #[arg(long, conflicts_with = "route")]
    pub verify: bool,

    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,

    /// Longest word the skein route will resolve.
    #[arg(long, default_value_t = permajones::jones::DEFAULT_SKEIN_BUDGET)]
    pub skein_budget: usize,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub source: BraidSource,

    /// Write entries evaluated at this point instead of as polynomials.
    #[arg(long)]
    pub numeric: Option<String>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub source: BraidSource,

    /// Estimate the permanent of a matrix in coordinate format.
    #[arg(long, conflicts_with_all = ["braid", "file"])]
    pub matrix_file: Option<PathBuf>,

    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Evaluation point: "re,im", a real number, or "exp:2pi/5".
    #[arg(long, default_value = "exp:2pi/5")]
    pub q0: String,

    #[arg(long, env = "PERMAJONES_WORKERS")]
    pub workers: Option<usize>,

    /// Write a CSV convergence trace here.
    #[arg(long)]
    pub trace: Option<PathBuf>,

    #[arg(long, default_value_t = 1000)]
    pub trace_every: u64,

    /// Largest matrix for which the exact Ryser reference is computed.
    #[arg(long, default_value_t = permajones::permanent::NUMERIC_RYSER_BOUND)]
    pub max_dim: usize,

    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Check this positive gadget file instead of the shipped one.
    #[arg(long)]
    pub positive_gadget: Option<PathBuf>,

    /// Check this negative gadget file instead of the shipped one.
    #[arg(long)]
    pub negative_gadget: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Dimension of the dense random matrix for the numeric Ryser run.
    #[arg(long, default_value_t = 20)]
    pub dim: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Syntax { .. } | Error::IndexOutOfRange { .. }) => 2,
            Failure::Core(Error::RecursionBudget { .. } | Error::DimensionBound { .. }) => 3,
            Failure::Core(Error::StateSumMismatch { .. }) | Failure::Mismatch(_) => 4,
            Failure::Core(_) | Failure::Io(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Jones(a) => commands::jones(&a),
        Command::Matrix(a) => commands::matrix(&a),
        Command::Estimate(a) => commands::estimate(&a),
        Command::Selftest(a) => commands::selftest(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Mismatch(m) => eprintln!("{m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
