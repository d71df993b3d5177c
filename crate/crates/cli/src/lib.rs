//! The `zx` command-line tool: zero tables, sums over zeros, predictions,
//! comparisons and the complex-plane figure of `S(X, T)`.

pub mod config;
pub mod figure;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use zx_core::asymptotics::{classify_regime, Regime};
use zx_core::quadrature::{afe_budget, afe_residual};
use zx_core::report::{self, calibrate, compare, parse_grid, Claim, Inputs, ReportContext};
use zx_core::zeros::{count_zeros, export_plain_text, import_zero_table, write_cache, ZeroFormat};
use zx_core::zerosums::{SumKind, SumSpec};
use zx_core::{ComplexScalar, Dd, Error};

use crate::config::{Overrides, RunConfig, ZeroSource, DEFAULT_TOL, PRECISION_ENV};

/// Exit status when a calibration fails its trend or cap criterion.
pub const EXIT_CLAIM_FAILED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "zx", version, about = "Sums over zeta zeros checked against explicit formulas")]
pub struct Cli {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Working precision in decimal digits (15..=31).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[arg(long, global = true)]
    pub sieve_limit: Option<u64>,
    /// `compute`, `import:<path>` or `cache:<path>`.
    #[arg(long, global = true)]
    pub zeros: Option<String>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute, import or count zeros.
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Compare a direct value with its prediction, optionally over a grid.
    Compare(CompareArgs),
    /// Partial sums of chi(rho) X^rho per zero as CSV and SVG.
    Figure1(FigureArgs),
    /// Residual of the approximate functional equation.
    Afe(AfeArgs),
    /// A sum over the zeros in a window.
    Sum(SumArgs),
    /// A predicted main term and error budget.
    Predict(PredictArgs),
}

#[derive(Subcommand, Debug)]
pub enum ZerosCommand {
    Find {
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Cache file to write (default `<out-dir>/zeros.ztbl`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the ordinates as plain text.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    Import {
        #[arg(long)]
        file: PathBuf,
        /// Cache file to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Count {
        #[arg(long = "T")]
        t: f64,
    },
}

/// Named inputs shared by `compare` and `predict`.
#[derive(Args, Debug, Default, Clone)]
pub struct ClaimInputs {
    #[arg(long = "X")]
    pub x: Option<f64>,
    #[arg(long = "T")]
    pub big_t: Option<f64>,
    #[arg(long = "t")]
    pub small_t: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

impl ClaimInputs {
    pub fn to_inputs(&self) -> Inputs {
        [
            ("X", self.x),
            ("T", self.big_t),
            ("t", self.small_t),
            ("sigma", self.sigma),
            ("r", self.r),
            ("nu", self.nu),
            ("alpha", self.alpha),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
    }
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub claim: String,
    /// `KEY=start:stop:step` or `KEY=v1,v2,...`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Override for the calibration cap on C.
    #[arg(long)]
    pub cap: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Output JSON file (default `<out-dir>/compare_<claim>.json`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub inputs: ClaimInputs,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    #[arg(long = "X")]
    pub x: f64,
    #[arg(long)]
    pub tmax: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tstart: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct AfeArgs {
    #[arg(long = "t")]
    pub t: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub nu: u32,
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKindArg {
    ChiXRho,
    XRho,
    XNegRho,
    ZetaDeriv,
    ChiWeighted,
}

#[derive(Args, Debug)]
pub struct SumArgs {
    #[arg(long, value_enum)]
    pub kind: SumKindArg,
    /// `X` (or the integer `n` for `chi-weighted`).
    #[arg(long = "X", default_value_t = 1.0)]
    pub x: f64,
    /// Derivative order (or the log power for `chi-weighted`).
    #[arg(long, default_value_t = 1)]
    pub nu: u32,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    #[arg(long)]
    pub hi: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// A claim id or one of `chi-sum`, `chi-sum-integer`, `s`,
    /// `landau-gonek`, `landau-gonek-neg`, `shanks`, `deriv-sum`, `j`, `afe`.
    #[arg(long)]
    pub claim: String,
    #[command(flatten)]
    pub inputs: ClaimInputs,
}

/// Exit status for an error: 2 for an unknown claim, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::UnknownClaim(_)) => 2,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    let env = std::env::var(PRECISION_ENV).ok();
    let flags = Overrides {
        precision_digits: cli.precision,
        sieve_limit: cli.sieve_limit,
        zero_source: cli.zeros.clone(),
        output_dir: cli.out_dir.clone(),
    };
    let cfg = RunConfig::resolve(cli.config.as_deref(), env.as_deref(), &flags)?;
    match cli.command {
        Command::Zeros(z) => cmd_zeros(&cfg, z),
        Command::Compare(a) => cmd_compare(&cfg, a),
        Command::Figure1(a) => cmd_figure1(&cfg, a).map(|_| ExitCode::SUCCESS),
        Command::Afe(a) => cmd_afe(&cfg, a),
        Command::Sum(a) => cmd_sum(&cfg, a),
        Command::Predict(a) => cmd_predict(&cfg, a),
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn cmd_zeros(cfg: &RunConfig, cmd: ZerosCommand) -> Result<ExitCode> {
    match cmd {
        ZerosCommand::Find { tmax, tol, out, export } => {
            let table = cfg.zeros(tmax, tol)?;
            let path = match (&out, &cfg.zero_source) {
                (Some(p), _) => p.clone(),
                (None, ZeroSource::Cache(p)) => p.clone(),
                _ => cfg.output_path("zeros.ztbl")?,
            };
            write_cache(&table, &path)?;
            if let Some(p) = export {
                export_plain_text(&table, &p)?;
            }
            println!("{}", table.len());
            eprintln!("{} zeros in (0, {tmax}] written to {}", table.len(), path.display());
        }
        ZerosCommand::Import { file, out } => {
            let table = import_zero_table(&file, ZeroFormat::PlainText)?;
            if let Some(p) = out {
                write_cache(&table, &p)?;
            }
            println!("{}", table.len());
            eprintln!("{} zeros up to {} imported and audited", table.len(), table.t_max());
        }
        ZerosCommand::Count { t } => println!("{}", count_zeros(t)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn file_stem(claim: &str) -> String {
    claim.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

pub fn cmd_compare(cfg: &RunConfig, args: CompareArgs) -> Result<ExitCode> {
    let claim: Claim = args.claim.parse()?;
    let base = args.inputs.to_inputs();
    let grid = match &args.grid {
        Some(spec) => Some(parse_grid(spec, &base)?),
        None => None,
    };
    let points = grid.clone().unwrap_or_else(|| vec![base.clone()]);
    let coverage = points.iter().filter_map(|p| claim.coverage(p)).fold(None, |a: Option<f64>, c| {
        Some(a.map_or(c, |a| a.max(c)))
    });
    let table = match coverage {
        Some(t) => Some(cfg.zeros(t.max(14.0), args.tol)?),
        None => None,
    };
    let mut ctx = ReportContext::new(table.as_ref(), cfg.sieve_limit, cfg.precision())?;
    if let Some(cap) = args.cap {
        ctx = ctx.with_cap(cap);
    }
    let out = match args.out {
        Some(p) => p,
        None => cfg.output_path(&format!("compare_{}.json", file_stem(claim.id())))?,
    };
    match grid {
        Some(grid) => {
            let run = calibrate(&ctx, claim.id(), &grid)?;
            write(&out, &report::to_json(&run)?)?;
            println!(
                "{}: C = {:.4e}, slope = {:.4}, {}",
                claim,
                run.fit.c,
                run.fit.trend_slope,
                if run.fit.passes { "pass" } else { "FAIL" }
            );
            if !run.fit.passes {
                return Ok(ExitCode::from(EXIT_CLAIM_FAILED));
            }
        }
        None => {
            let r = compare(&ctx, claim.id(), &base)?;
            write(&out, &r.to_json()?)?;
            println!("{}: residual = {:.6e}, budget = {:.6e}, ratio = {:.6e}", claim, r.residual, r.budget, r.ratio);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Writes `figure1.csv` and `figure1.svg`; returns their paths.
pub fn cmd_figure1(cfg: &RunConfig, args: FigureArgs) -> Result<(PathBuf, PathBuf)> {
    let table = cfg.zeros(args.tmax, args.tol)?;
    let rows = figure::figure_rows(&table, args.x, args.tstart, args.tmax, cfg.precision())?;
    let csv = cfg.output_path("figure1.csv")?;
    let svg = cfg.output_path("figure1.svg")?;
    write(&csv, &figure::to_csv(&rows))?;
    write(&svg, &figure::to_svg(&rows, args.x))?;
    println!("{} rows", rows.len());
    Ok((csv, svg))
}

#[derive(Serialize)]
struct AfeOutput {
    s: ComplexScalar,
    alpha: f64,
    nu: u32,
    residual: ComplexScalar,
    residual_abs: f64,
    budget: f64,
}

pub fn cmd_afe(cfg: &RunConfig, a: AfeArgs) -> Result<ExitCode> {
    let s = ComplexScalar::new(Dd::from_f64(a.sigma), Dd::from_f64(a.t));
    let residual = afe_residual(s, a.alpha, a.nu, cfg.precision())?;
    let out = AfeOutput {
        s,
        alpha: a.alpha,
        nu: a.nu,
        residual,
        residual_abs: residual.abs().to_f64(),
        budget: afe_budget(a.t, a.alpha, a.nu),
    };
    println!("{}", report::to_json(&out)?);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SumOutput {
    kind: &'static str,
    x: f64,
    nu: u32,
    lo: f64,
    hi: f64,
    count: usize,
    value: ComplexScalar,
}

pub fn cmd_sum(cfg: &RunConfig, a: SumArgs) -> Result<ExitCode> {
    let (kind, name, x, nu) = match a.kind {
        SumKindArg::ChiXRho => (SumKind::ChiXRho, "chi-x-rho", a.x, 0),
        SumKindArg::XRho => (SumKind::XRho, "x-rho", a.x, 0),
        SumKindArg::XNegRho => (SumKind::XNegRho, "x-neg-rho", a.x, 0),
        SumKindArg::ZetaDeriv => (SumKind::ZetaDeriv, "zeta-deriv", 0.0, a.nu),
        SumKindArg::ChiWeighted => (SumKind::ChiWeighted, "chi-weighted", a.x, a.nu),
    };
    let table = cfg.zeros(a.hi.max(14.0), a.tol)?;
    let w = table.window(a.lo, a.hi)?;
    let value = SumSpec::new(kind, x, nu, w)?.evaluate(cfg.precision())?;
    let out = SumOutput {
        kind: name,
        x,
        nu,
        lo: a.lo,
        hi: a.hi,
        count: w.len(),
        value,
    };
    println!("{}", report::to_json(&out)?);
    Ok(ExitCode::SUCCESS)
}

/// Resolves registry ids and the short aliases accepted by `predict`.
pub fn resolve_claim(name: &str, inputs: &Inputs) -> Result<Claim> {
    if let Ok(c) = name.parse() {
        return Ok(c);
    }
    Ok(match name {
        "chi-sum" => Claim::ChiSum,
        "chi-sum-integer" => Claim::ChiSumInteger,
        "s" => {
            let (Some(&x), Some(&t)) = (inputs.get("X"), inputs.get("T")) else {
                bail!("claim `s` needs --X and --T");
            };
            Claim::S(classify_regime(x, t))
        }
        "landau-gonek" => Claim::LandauGonek,
        "landau-gonek-neg" => Claim::LandauGonekNegative,
        "shanks" => Claim::Shanks,
        "deriv-sum" => Claim::DerivSum,
        "j" => Claim::J,
        "afe" => Claim::Afe,
        other => return Err(Error::UnknownClaim(other.to_string()).into()),
    })
}

#[derive(Serialize)]
struct PredictOutput<'a> {
    claim_id: &'static str,
    inputs: &'a Inputs,
    #[serde(skip_serializing_if = "Option::is_none")]
    regime: Option<Regime>,
    prediction: zx_core::asymptotics::AsymptoticPrediction,
}

pub fn cmd_predict(cfg: &RunConfig, a: PredictArgs) -> Result<ExitCode> {
    let inputs = a.inputs.to_inputs();
    let claim = resolve_claim(&a.claim, &inputs)?;
    let sieve = zx_core::arith::LambdaSieve::new(cfg.sieve_limit)?;
    let prediction = report::predict(&sieve, claim, &inputs)?;
    let regime = match claim {
        Claim::S(r) => Some(r),
        _ => None,
    };
    let out = PredictOutput {
        claim_id: claim.id(),
        inputs: &inputs,
        regime,
        prediction,
    };
    println!("{}", report::to_json(&out)?);
    Ok(ExitCode::SUCCESS)
}
