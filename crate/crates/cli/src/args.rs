use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "born",
    version,
    about = "Born-approximation amplitudes, cross sections and Coulomb route checks",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Scattering amplitude at each momentum transfer, one row per method.
    Amplitude,
    /// Differential cross section over an angle grid.
    Xsec,
    /// Closed form, screened limit and cylindrical routes side by side (Coulomb only).
    Compare,
    /// Run the distribution identity suite.
    Verify,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Amplitude => "amplitude",
            Command::Xsec => "xsec",
            Command::Compare => "compare",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Coulomb,
    Yukawa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Shared {
    #[arg(long, global = true, value_enum)]
    pub potential: Option<PotentialKind>,

    /// Coupling strength e².
    #[arg(long, global = true)]
    pub e2: Option<f64>,

    /// Screening mass of the Yukawa potential.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,

    /// repulsive or attractive.
    #[arg(long, global = true)]
    pub sign: Option<String>,

    #[arg(long, global = true)]
    pub m1: Option<f64>,

    #[arg(long, global = true)]
    pub m2: Option<f64>,

    /// Reduced mass, instead of --m1/--m2.
    #[arg(long, global = true)]
    pub m: Option<f64>,

    /// Momentum magnitude.
    #[arg(long, global = true)]
    pub p: Option<f64>,

    /// Scattering angles in degrees, comma separated.
    #[arg(long = "theta-deg", global = true, value_delimiter = ',')]
    pub theta_deg: Option<Vec<f64>>,

    /// Momentum transfers, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub q: Option<Vec<f64>>,

    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long = "lambda-start", global = true)]
    pub lambda_start: Option<f64>,

    #[arg(long = "lambda-ratio", global = true)]
    pub lambda_ratio: Option<f64>,

    #[arg(long = "lambda-steps", global = true)]
    pub lambda_steps: Option<usize>,

    /// Amplitude routes, comma separated (names or aliases).
    #[arg(long, global = true, value_delimiter = ',')]
    pub method: Option<Vec<String>>,

    /// Cross-check intermediate results and fail loudly on disagreement.
    #[arg(long, global = true)]
    pub strict: bool,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Flat key=value file mirroring the flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// compare: largest accepted relative gap (default max(10·tol, 1e-6)).
    #[arg(long = "gap-tol", global = true)]
    pub gap_tol: Option<f64>,

    /// verify: random seed for the test functions.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// verify: test functions per identity.
    #[arg(long, global = true)]
    pub count: Option<usize>,

    /// verify: only these identities, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub identity: Option<Vec<String>>,
}
