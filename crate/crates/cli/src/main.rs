mod commands;

use std::net::IpAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tstrace_core::DiscountMode;

/// Thompson Sampling simulator, trace validator and inspector backend.
#[derive(Debug, Parser)]
#[command(name = "tstrace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Bernoulli bandit simulation and write its trace.
    Simulate(SimulateArgs),
    /// Compute highest-density bands for a Beta posterior or a whole trace.
    Hdr(HdrArgs),
    /// Check a trace for inconsistencies with the sampling rules.
    Validate(ValidateArgs),
    /// Generate the bundled non-stationary demo trace.
    Demo(DemoArgs),
    /// Serve traces in a directory over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of arms; taken from --env when omitted.
    #[arg(long)]
    pub arms: Option<usize>,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub prior_alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub prior_beta: f64,
    /// `paper_literal` or `prior_anchored`.
    #[arg(long, default_value = "paper_literal")]
    pub discount_mode: DiscountMode,
    /// JSON environment; defaults to stationary p_k = (k + 1) / (K + 1).
    #[arg(long)]
    pub env: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HdrArgs {
    #[arg(long, required_unless_present = "trace", requires = "beta", conflicts_with = "trace")]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    pub beta: Option<f64>,
    /// Emit one band per (t, arm) of this trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, default_value_t = tstrace_core::hdr::DEFAULT_RHO)]
    pub rho: f64,
    #[arg(long, default_value_t = tstrace_core::hdr::DEFAULT_EPS)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub trace: PathBuf,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// First seed tried by the search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub trace_dir: PathBuf,
    #[arg(long, default_value_t = 8000)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    /// Allowed CORS origin; any origin when omitted.
    #[arg(long)]
    pub allow_origin: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Hdr(args) => commands::hdr(args),
        Command::Validate(args) => commands::validate(args),
        Command::Demo(args) => commands::demo(args),
        Command::Serve(args) => commands::serve(args),
    };
    match result {
        Ok(code) => code,
        Err(e @ commands::CliError::BrokenPipe) => e.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
