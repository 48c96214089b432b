use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use tstrace_core::demo::{generate_demo, DemoRun, DEMO_WINDOW};
use tstrace_core::hdr::HdrBand;
use tstrace_core::trace::{parse_trace, read_trace_file, validate_external, write_trace_file};
use tstrace_core::{cumulative_regret, hdr_interval, run_simulation, BanditConfig, Environment, RunTrace};

use crate::{DemoArgs, HdrArgs, ServeArgs, SimulateArgs, ValidateArgs};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FINDINGS: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Downstream reader went away; not worth reporting.
    BrokenPipe,
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::BrokenPipe => ExitCode::SUCCESS,
            CliError::Io(_) => ExitCode::from(EXIT_IO),
            CliError::Usage(_) => ExitCode::from(EXIT_USAGE),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::BrokenPipe => f.write_str("broken pipe"),
            CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<tstrace_core::Error> for CliError {
    fn from(e: tstrace_core::Error) -> Self {
        match e {
            tstrace_core::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError::BrokenPipe;
        }
        CliError::Io(e.to_string())
    }
}

type CmdResult = Result<ExitCode, CliError>;

fn io_context(path: &Path) -> impl FnOnce(tstrace_core::Error) -> CliError + '_ {
    move |e| match e {
        tstrace_core::Error::Io(io) => CliError::Io(format!("{}: {io}", path.display())),
        other => CliError::Usage(format!("{}: {other}", path.display())),
    }
}

fn load_environment(path: &Path) -> Result<Environment, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Environment::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn default_environment(num_arms: usize) -> Result<Environment, CliError> {
    let k = num_arms as f64;
    Ok(Environment::stationary((0..num_arms).map(|i| (i as f64 + 1.0) / (k + 1.0)).collect())?)
}

pub fn simulate(args: SimulateArgs) -> CmdResult {
    let env = match &args.env {
        Some(path) => Some(load_environment(path)?),
        None => None,
    };
    let num_arms = match (args.arms, &env) {
        (Some(k), Some(env)) if k != env.num_arms => {
            return Err(CliError::Usage(format!("--arms {k} disagrees with environment ({} arms)", env.num_arms)))
        }
        (Some(k), _) => k,
        (None, Some(env)) => env.num_arms,
        (None, None) => return Err(CliError::Usage("--arms is required without --env".into())),
    };
    let config = BanditConfig::new(num_arms, args.steps, args.seed)
        .with_gamma(args.gamma)
        .with_prior(args.prior_alpha, args.prior_beta)
        .with_discount_mode(args.discount_mode);
    config.validate()?;
    let env = match env {
        Some(env) => env,
        None => default_environment(num_arms)?,
    };

    let trace = run_simulation(&config, &env)?;
    write_trace_file(&trace, &args.out).map_err(io_context(&args.out))?;
    print_summary(&trace, &env)?;
    Ok(ExitCode::SUCCESS)
}

fn print_summary(trace: &RunTrace, env: &Environment) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    writeln!(out, "run {}  ({} steps, {} arms)", trace.meta.run_id, trace.len(), trace.num_arms())?;
    writeln!(out, "{:>4} {:>8} {:>10} {:>8}", "arm", "pulls", "successes", "rate")?;
    for (arm, (pulls, wins)) in trace.pull_counts().into_iter().enumerate() {
        let rate = if pulls == 0 { f64::NAN } else { wins as f64 / pulls as f64 };
        writeln!(out, "{arm:>4} {pulls:>8} {wins:>10} {rate:>8.4}")?;
    }
    if let Some(&regret) = cumulative_regret(trace, env)?.last() {
        writeln!(out, "final regret {regret:.4}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct BatchBand<'a> {
    t: usize,
    arm: usize,
    #[serde(flatten)]
    band: &'a HdrBand,
}

pub fn hdr(args: HdrArgs) -> CmdResult {
    let mut out = BufWriter::new(io::stdout().lock());
    match (&args.trace, args.alpha, args.beta) {
        (Some(path), _, _) => {
            let trace = read_trace_file(path).map_err(io_context(path))?;
            for rec in &trace.steps {
                for (arm, state) in rec.arms.iter().enumerate() {
                    let band = hdr_interval(state.alpha, state.beta, args.rho, args.eps)?;
                    serde_json::to_writer(&mut out, &BatchBand { t: rec.t, arm, band: &band })
                        .map_err(io::Error::from)?;
                    out.write_all(b"\n")?;
                }
            }
        }
        (None, Some(alpha), Some(beta)) => {
            let band = hdr_interval(alpha, beta, args.rho, args.eps)?;
            serde_json::to_writer(&mut out, &band).map_err(io::Error::from)?;
            out.write_all(b"\n")?;
        }
        _ => return Err(CliError::Usage("either --alpha and --beta, or --trace, is required".into())),
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn validate(args: ValidateArgs) -> CmdResult {
    let file = fs::File::open(&args.trace).map_err(|e| CliError::Io(format!("{}: {e}", args.trace.display())))?;
    let findings: Vec<String> = match parse_trace(io::BufReader::new(file)) {
        Ok(trace) => validate_external(&trace).iter().map(ToString::to_string).collect(),
        Err(tstrace_core::Error::Io(e)) => return Err(CliError::Io(format!("{}: {e}", args.trace.display()))),
        // A file that does not parse is reported like any other finding.
        Err(e) => vec![format!("structure: {e}")],
    };
    if findings.is_empty() {
        println!("ok");
        return Ok(ExitCode::SUCCESS);
    }
    let mut out = io::stdout().lock();
    for finding in &findings {
        writeln!(out, "{finding}")?;
    }
    Ok(ExitCode::from(EXIT_FINDINGS))
}

pub fn demo(args: DemoArgs) -> CmdResult {
    let DemoRun { trace, step, arm, share_before, share_after } = generate_demo(args.seed)?;
    write_trace_file(&trace, &args.out).map_err(io_context(&args.out))?;
    println!("{step}");
    eprintln!(
        "seed {}: exploration of arm {arm} at t={step} paid off; share {share_before:.2} -> {share_after:.2} over {DEMO_WINDOW} steps",
        trace.meta.seed
    );
    Ok(ExitCode::SUCCESS)
}

pub fn serve(args: ServeArgs) -> CmdResult {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(io::stderr)
        .init();
    if !args.trace_dir.is_dir() {
        return Err(CliError::Io(format!("{}: not a directory", args.trace_dir.display())));
    }
    let config = tstrace_service::ServiceConfig {
        trace_dir: args.trace_dir,
        addr: SocketAddr::new(args.host, args.port),
        allow_origin: args.allow_origin,
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(tstrace_service::serve(config))?;
    Ok(ExitCode::SUCCESS)
}
