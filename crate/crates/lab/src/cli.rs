use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use typicality_core::closedform::ClosedFormQuantity;
use typicality_core::montecarlo::QuantityId;

use crate::commands::{self, FigureOptions, VerifyOptions, CLAIMS};
use crate::error::{LabError, Result};
use crate::output::{emit, render, Format, Row};
use crate::runner::Runner;

const DEFAULT_SEED: u64 = 1;
const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(name = "typicality", version, about = "Typicality of coherence and entanglement in Haar-random pure states")]
pub struct Cli {
    /// Worker threads; results do not depend on it. Defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format (default: csv for `figure`, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo mean and variance of one quantity.
    Estimate(EstimateArgs),
    /// Evaluate closed-form averages.
    Closedform(ClosedFormArgs),
    /// Compare Monte Carlo estimates with closed forms.
    Verify(VerifyArgs),
    /// Empirical tail probabilities next to the concentration bounds.
    Tails(TailArgs),
    /// Entangled Bures average against κ = log₂ N.
    Figure(FigureArgs),
    /// Every closed form and concentration bound at one N.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, value_parser = parse_quantity)]
    pub quantity: QuantityId,
    #[arg(long, value_parser = parse_positive_u64)]
    pub n: u64,
    /// Required for alpha_purity.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = parse_count)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ClosedFormArgs {
    /// Closed-form ids, comma separated; all when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_closed_form)]
    pub quantity: Vec<ClosedFormQuantity>,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_positive_u64)]
    pub n: Vec<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Claim ids, comma separated; the default grid when omitted.
    #[arg(long, value_delimiter = ',')]
    pub claim: Vec<String>,
    /// Overrides each claim's dimensions.
    #[arg(long, value_delimiter = ',', value_parser = parse_positive_u64)]
    pub n: Vec<u64>,
    /// Overrides the α grid of the purity claims.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// Overrides each claim's default sample count.
    #[arg(long, value_parser = parse_count)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// List the claims and exit.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[arg(long, value_parser = parse_quantity)]
    pub quantity: QuantityId,
    #[arg(long, value_parser = parse_positive_u64)]
    pub n: u64,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub epsilon: Vec<f64>,
    /// Center of the deviation; defaults to the closed-form mean.
    #[arg(long)]
    pub center: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = parse_count)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, default_value_t = 1)]
    pub kappa_min: u32,
    #[arg(long, default_value_t = 6)]
    pub kappa_max: u32,
    /// Monte Carlo samples per point; 0 disables the Monte Carlo columns.
    #[arg(long, default_value_t = 20_000, value_parser = parse_count_or_zero)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest κ that gets a Monte Carlo estimate.
    #[arg(long, default_value_t = 5)]
    pub mc_max_kappa: u32,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_parser = parse_positive_u64)]
    pub n: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1")]
    pub epsilon: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,2,3")]
    pub alpha: Vec<f64>,
}

fn parse_quantity(s: &str) -> std::result::Result<QuantityId, String> {
    s.parse().map_err(|e: typicality_core::Error| e.to_string())
}

fn parse_closed_form(s: &str) -> std::result::Result<ClosedFormQuantity, String> {
    ClosedFormQuantity::from_id(s).ok_or_else(|| {
        let known: Vec<_> = ClosedFormQuantity::ALL.iter().map(|q| q.id()).collect();
        format!("unknown closed form `{s}`; known: {}", known.join(", "))
    })
}

/// Accepts plain integers and integral scientific notation (`1e5`).
fn parse_count_or_zero(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    match parse_count_or_zero(s)? {
        0 => Err("must be at least 1".into()),
        v => Ok(v),
    }
}

fn parse_positive_u64(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn write<R: Row>(cli: &Cli, rows: &[R], default: Format, single: bool) -> Result<()> {
    let bytes = render(rows, cli.format.unwrap_or(default), single)?;
    emit(&bytes, cli.out.as_deref())
}

fn check_positive(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        Some(v) => Err(LabError::Usage(format!("{name} must be positive, got {v}"))),
        None => Ok(()),
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    let runner = || Runner::new(cli.threads);
    match &cli.command {
        Command::Estimate(a) => {
            let spec = commands::spec(a.quantity, a.n, a.alpha)?;
            let rec = commands::estimate(&runner()?, &spec, a.samples, a.seed)?;
            write(cli, &[rec], Format::Json, true)?;
        }
        Command::Closedform(a) => {
            let quantities = if a.quantity.is_empty() {
                ClosedFormQuantity::ALL
                    .into_iter()
                    .filter(|q| !q.needs_alpha() || a.alpha.is_some())
                    .collect()
            } else {
                a.quantity.clone()
            };
            write(cli, &commands::closed_forms(&quantities, &a.n, a.alpha)?, Format::Json, false)?;
        }
        Command::Verify(a) => {
            if a.list {
                for c in CLAIMS {
                    let grid = if c.default_grid { "" } else { " (not in default grid)" };
                    println!("{}: {} of {} vs {}{grid}", c.id, c.statistic.as_str(), c.quantity, c.reference.id());
                }
                return Ok(0);
            }
            check_positive("alpha", &a.alpha)?;
            let claims: Vec<_> = if a.claim.is_empty() {
                CLAIMS.iter().filter(|c| c.default_grid).collect()
            } else {
                a.claim.iter().map(|id| commands::find_claim(id)).collect::<Result<_>>()?
            };
            let opts = VerifyOptions {
                dims: (!a.n.is_empty()).then(|| a.n.clone()),
                alphas: (!a.alpha.is_empty()).then(|| a.alpha.clone()),
                samples: a.samples,
                seed: a.seed,
            };
            let rows = commands::verify(&runner()?, &claims, &opts)?;
            write(cli, &rows, Format::Json, false)?;
            let passed = rows.iter().filter(|r| r.pass == Some(true)).count();
            eprintln!("verify: {passed}/{} rows passed", rows.len());
            if passed != rows.len() {
                return Ok(1);
            }
        }
        Command::Tails(a) => {
            check_positive("epsilon", &a.epsilon)?;
            let spec = commands::spec(a.quantity, a.n, a.alpha)?;
            let rows = commands::tails(&runner()?, &spec, a.center, &a.epsilon, a.samples, a.seed)?;
            write(cli, &rows, Format::Json, false)?;
        }
        Command::Figure(a) => {
            let opts = FigureOptions {
                kappa_min: a.kappa_min,
                kappa_max: a.kappa_max,
                samples: a.samples,
                seed: a.seed,
                mc_max_kappa: a.mc_max_kappa,
            };
            write(cli, &commands::figure(&runner()?, &opts)?, Format::Csv, false)?;
        }
        Command::Report(a) => {
            check_positive("epsilon", &a.epsilon)?;
            check_positive("alpha", &a.alpha)?;
            write(cli, &commands::report(a.n, &a.alpha, &a.epsilon)?, Format::Json, false)?;
        }
    }
    Ok(0)
}

/// Parses `args` and runs; usage errors exit 2, runtime errors 3.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
