//! Command-line front end for `alphaindex`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 for invalid input or parameters, 2 for I/O
//! failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;
mod output;

pub use output::Format;

#[derive(Debug, Parser)]
#[command(name = "alphaindex", version, about = "Rank researcher groups by alpha-index and analyze citation distributions")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,

    /// Write output to this file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Suppress warnings
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Read `.csv` input as tab-delimited
    #[arg(long, global = true)]
    pub tab: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-group n, mean h, standard error, h-group and Gini coefficient
    Metrics(InputArgs),
    /// Rank groups by alpha-index
    Rank(RankArgs),
    /// Lorenz curve points of each group, plus the identity diagonal
    Lorenz(InputArgs),
    /// Psi-curve points of each group with its h-group
    Psi(InputArgs),
    /// Distribution analyses of h-indexes and citation counts
    Distfit(DistfitArgs),
    /// Draw a stretched-exponential sample
    Synth(SynthArgs),
    /// Check a dataset and list every problem found
    Validate(InputArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Dataset file (.json, .csv or .tsv)
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    pub input: PathBuf,

    /// Seed for Monte Carlo subsampling
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Subsets drawn per group
    #[arg(long, default_value_t = alphaindex::ranking::DEFAULT_N_SAMPLE)]
    pub samples: usize,

    /// Subset size; defaults to the size of the smallest group
    #[arg(long)]
    pub ref_size: Option<usize>,

    /// Lower clamp for Gini coefficients
    #[arg(long, default_value_t = alphaindex::ranking::DEFAULT_GINI_FLOOR)]
    pub gini_floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    /// Log-log slope of total citations against h-index
    Slope,
    /// Stretched-exponential shape of total citations by moment ratios
    Beta,
    /// Giddings fit to the h-index histogram
    Giddings,
    /// Shapiro-Wilk test of h-indexes, per group
    Normality,
    /// Mean, variance, skewness and kurtosis of h-indexes, per group
    Moments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Binning {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    Log,
    Raw,
}

#[derive(Debug, Args)]
pub struct DistfitArgs {
    /// Dataset file, or a plain numeric column (one value per line)
    pub input: PathBuf,

    #[arg(long, value_enum)]
    pub analysis: Analysis,

    /// Restrict to one group
    #[arg(long, value_name = "GROUP_ID")]
    pub group: Option<String>,

    /// Histogram binning for the Giddings fit
    #[arg(long, value_enum, default_value = "linear")]
    pub binning: Binning,

    /// Bin width (linear) or edge ratio (geometric); defaults to 1 and 2
    #[arg(long)]
    pub bin_width: Option<f64>,

    /// Distance between theoretical and empirical moment ratios
    #[arg(long, value_enum, default_value = "log")]
    pub objective: Objective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// Density proportional to exp(-(x/x0)^beta)
    Density,
    /// Survival function exp(-(x/x0)^beta)
    Survival,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub beta: f64,

    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,

    /// Sample size
    #[arg(long)]
    pub n: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Round to integers and write a summary-form dataset: one member per
    /// draw with total_citations = x and h_index = floor(sqrt(x))
    #[arg(long)]
    pub round: bool,

    #[arg(long, value_enum, default_value = "density")]
    pub form: Form,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<alphaindex::Error> for CliError {
    fn from(e: alphaindex::Error) -> Self {
        Self::invalid(e.to_string())
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, A>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };

    let mut warnings = Vec::new();
    let result = commands::execute(&cli, &mut warnings);
    if !cli.quiet {
        for w in &warnings {
            let _ = writeln!(stderr, "warning: {w}");
        }
    }
    let (text, code) = match result {
        Ok(done) => done,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            return e.code;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    match written {
        Ok(()) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
