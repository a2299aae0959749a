use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "xi-ineq", version, about = "Numerical checks of theta-series representations of |xi(s)|^2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// S and T constants per method, with sign checks.
    Constants,
    /// Representation and J routes against the classical integral, on a grid.
    VerifyModulus,
    /// Positivity scan of |xi(sigma - it)|^2 through one of its representations.
    Scan,
    /// Power-series coefficients of |xi(sigma - it)|^2 in t^2.
    Coeffs,
    /// Monte Carlo estimate of E[cos(tX)] against quadrature.
    Montecarlo,
    /// Normalized autocorrelation A(t) and a scan for its first zero.
    Autocorr,
    /// The two appendix recipes at their stated truncations.
    ReproduceAppendix,
    /// Reduced-grid run of the invariant suite.
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Constants => "constants",
            Command::VerifyModulus => "verify-modulus",
            Command::Scan => "scan",
            Command::Coeffs => "coeffs",
            Command::Montecarlo => "montecarlo",
            Command::Autocorr => "autocorr",
            Command::ReproduceAppendix => "reproduce-appendix",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Recipe {
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to per-command defaults.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// One or more comma-separated sigma values.
    #[arg(long, global = true, value_delimiter = ',')]
    pub sigma: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Comma-separated t values (montecarlo).
    #[arg(long = "t", global = true, value_delimiter = ',')]
    pub t_values: Option<Vec<f64>>,
    /// constants: a, b, c or all. scan: representation, j-eta or k-fourier.
    #[arg(long, global = true)]
    pub method: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Highest coefficient index (coeffs).
    #[arg(long, global = true)]
    pub k_max: Option<u32>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat `key = value` file. Defaults to $XI_INEQ_CONFIG when set.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub paper_truncation: Option<Recipe>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}
