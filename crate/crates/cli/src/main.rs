//! Command-line front end: condition checks, oracle runs, implication sweeps,
//! bound tables and membership tests, each writing a self-describing report.

mod commands;
mod config;
mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use janowski_core::conditions::Lemma;
use janowski_core::lab::parse_coefficients;
use janowski_core::oracle::OracleGrid;
use janowski_core::OperatorKind;
use log::error;

use config::{default_radius, Format, Job, ParamGrid, RunConfig, ValueRange};

/// Invalid flags, files or configurations; exits with status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

const THREADS_ENV: &str = "JANOWSKI_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "janowski-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the closed-form sufficient conditions.
    Check(Flags),
    /// Brute-force the admissibility condition on a (rho, sigma) grid.
    Oracle(Flags),
    /// Search for counterexamples with random p of fixed initial coefficient.
    ImplicationSweep(Flags),
    /// Tabulate the corollary radii over lambda and (n, mu') pairs.
    Bounds(Flags),
    /// Test zf'/f against (1+Az)/(1+Bz) for coefficients read from a file.
    Membership(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Lemma id 2.1..2.6, or "all".
    #[arg(long)]
    lemma: Option<String>,
    /// Operator: linear, invsq, logderiv, sqderiv, mixed or convex.
    #[arg(long)]
    operator: Option<String>,
    #[arg(long = "A", allow_hyphen_values = true, value_name = "VALUE|START:STOP:STEP")]
    a: Option<String>,
    #[arg(long = "B", allow_hyphen_values = true, value_name = "VALUE|START:STOP:STEP")]
    b: Option<String>,
    #[arg(long = "D", allow_hyphen_values = true, value_name = "VALUE|START:STOP:STEP")]
    d: Option<String>,
    #[arg(long = "E", allow_hyphen_values = true, value_name = "VALUE|START:STOP:STEP")]
    e: Option<String>,
    /// Defaults to 1; for bounds this is the lambda grid (default 0:0.9:0.1).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Fixed coefficient mu, at most A - B.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// mu' grid for bounds (default 2).
    #[arg(long = "mu-prime", allow_hyphen_values = true)]
    mu_prime: Option<String>,
    #[arg(long)]
    grid_rho_max: Option<f64>,
    #[arg(long)]
    grid_rho_steps: Option<usize>,
    #[arg(long)]
    grid_sigma_depth: Option<f64>,
    #[arg(long)]
    grid_sigma_steps: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Check radius; defaults to 1 - 1e-3.
    #[arg(long)]
    radius: Option<f64>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Coefficient file: one "re im" pair per line, c_0 first; '#' starts a comment.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Replay the configuration embedded in an earlier JSON report (or a bare config).
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_lemmas(flags: &Flags) -> Result<Vec<Lemma>, InputError> {
    match (&flags.lemma, &flags.operator) {
        (Some(_), Some(_)) => Err(InputError("give --lemma or --operator, not both".into())),
        (None, Some(op)) => OperatorKind::from_cli_name(op)
            .map(|k| vec![Lemma::for_operator(k)])
            .ok_or_else(|| InputError(format!("unknown operator '{op}'"))),
        (Some(id), None) if id == "all" => Ok(Lemma::ALL.to_vec()),
        (Some(id), None) => Lemma::from_id(id)
            .map(|l| vec![l])
            .ok_or_else(|| InputError(format!("unknown lemma '{id}' (expected 2.1..2.6 or all)"))),
        (None, None) => Ok(Lemma::ALL.to_vec()),
    }
}

fn range(flag: &str, value: &Option<String>, default: Option<&str>) -> Result<ValueRange, InputError> {
    match (value.as_deref(), default) {
        (Some(text), _) | (None, Some(text)) => ValueRange::parse(flag, text),
        (None, None) => Err(InputError(format!("missing required flag --{flag}"))),
    }
}

fn param_grid(flags: &Flags) -> Result<ParamGrid, InputError> {
    Ok(ParamGrid {
        a: range("A", &flags.a, None)?,
        b: range("B", &flags.b, None)?,
        d: range("D", &flags.d, None)?,
        e: range("E", &flags.e, None)?,
        alpha: range("alpha", &flags.alpha, Some("1"))?,
        lambda: range("lambda", &flags.lambda, Some("1"))?,
        n: range("n", &flags.n, Some("1"))?,
        mu: range("mu", &flags.mu, None)?,
    })
}

fn oracle_grid(flags: &Flags) -> OracleGrid {
    let d = OracleGrid::default();
    OracleGrid {
        rho_max: flags.grid_rho_max.unwrap_or(d.rho_max),
        rho_steps: flags.grid_rho_steps.unwrap_or(d.rho_steps),
        sigma_depth: flags.grid_sigma_depth.unwrap_or(d.sigma_depth),
        sigma_steps: flags.grid_sigma_steps.unwrap_or(d.sigma_steps),
        seed: flags.seed.unwrap_or(d.seed),
        jitter: d.jitter,
    }
}

fn read_coefficients(path: &Path) -> Result<Vec<[f64; 2]>, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("reading {}: {e}", path.display())))?;
    let coeffs = parse_coefficients(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(coeffs.iter().map(|c| [c.re, c.im]).collect())
}

fn scalar(flag: &str, value: &Option<String>) -> Result<f64, InputError> {
    match range(flag, value, None)? {
        ValueRange::Scalar(v) => Ok(v),
        ValueRange::Range { .. } => Err(InputError(format!("--{flag} takes a single value here"))),
    }
}

fn job_from_flags(command: &Command, flags: &Flags) -> Result<Job, InputError> {
    Ok(match command {
        Command::Check(_) => Job::Check { lemmas: parse_lemmas(flags)?, params: param_grid(flags)? },
        Command::Oracle(_) => Job::Oracle { lemmas: parse_lemmas(flags)?, params: param_grid(flags)?, grid: oracle_grid(flags) },
        Command::ImplicationSweep(_) => Job::ImplicationSweep {
            lemmas: parse_lemmas(flags)?,
            params: param_grid(flags)?,
            trials: flags.trials.unwrap_or(200),
            seed: flags.seed.unwrap_or(0),
            radius: flags.radius.unwrap_or_else(default_radius),
        },
        Command::Bounds(_) => Job::Bounds {
            lambda: range("lambda", &flags.lambda, Some("0:0.9:0.1"))?,
            n: range("n", &flags.n, Some("1"))?,
            mu_prime: range("mu-prime", &flags.mu_prime, Some("2"))?,
        },
        Command::Membership(_) => {
            let path = flags.coeffs.clone().ok_or_else(|| InputError("missing required flag --coeffs".into()))?;
            Job::Membership {
                coefficients: read_coefficients(&path)?,
                coeffs_file: path,
                a: scalar("A", &flags.a)?,
                b: scalar("B", &flags.b)?,
                radius: flags.radius.unwrap_or_else(default_radius),
            }
        }
    })
}

/// Loads a bare config or the `config` member of an earlier report.
fn load_config(path: &Path) -> Result<RunConfig, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("reading {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| InputError(format!("{}: not JSON: {e}", path.display())))?;
    let inner = value.get("config").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| InputError(format!("{}: malformed config: {e}", path.display())))
}

fn resolve(command: &Command, flags: &Flags) -> Result<RunConfig, InputError> {
    let Some(path) = &flags.config else {
        return Ok(RunConfig { job: job_from_flags(command, flags)?, output_format: flags.format.unwrap_or(Format::Json) });
    };
    let cfg = load_config(path)?;
    let wanted = match command {
        Command::Check(_) => "check",
        Command::Oracle(_) => "oracle",
        Command::ImplicationSweep(_) => "implication-sweep",
        Command::Bounds(_) => "bounds",
        Command::Membership(_) => "membership",
    };
    if cfg.job.name() != wanted {
        return Err(InputError(format!("config is for '{}', not '{wanted}'", cfg.job.name())));
    }
    Ok(cfg)
}

fn configure_threads() -> Result<(), InputError> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| InputError(format!("{THREADS_ENV} must be a positive integer (got '{text}')")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| InputError(format!("thread pool: {e}")))
}

fn execute(cli: Cli) -> Result<bool, InputError> {
    configure_threads()?;
    let flags = match &cli.command {
        Command::Check(f)
        | Command::Oracle(f)
        | Command::ImplicationSweep(f)
        | Command::Bounds(f)
        | Command::Membership(f) => f,
    };
    let config = resolve(&cli.command, flags)?;
    let outcome = commands::run(&config)?;
    report::emit(flags.out.as_deref(), &outcome.bytes)
        .map_err(|e| InputError(format!("writing report: {e}")))?;
    Ok(outcome.success)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            error!("{e}");
            ExitCode::from(2)
        }
    }
}
