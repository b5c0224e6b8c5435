//! `hypsym`: batch runner for symmetrizer, condition and energy experiments.
//!
//! Exit codes: 0 every check holds, 1 input error, 2 a check failed,
//! 3 the numerical resolution was insufficient.

mod config;
mod cubic;
mod energy;
mod error;
mod poly;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;
use error::CliError;
use report::{OutDir, Report, RunMeta, META_FILE, REPORT_FILE};

#[derive(Debug, Parser)]
#[command(name = "hypsym", version, about = "Symmetrizer, condition and energy experiments")]
struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for the report, traces and run metadata.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Tolerance of the command's primary check.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hyperbolic polynomials and their Bézout symmetrizers.
    Poly {
        #[command(subcommand)]
        op: PolyOp,
    },
    /// Conditions, classification and extension of cubic symbols.
    Cubic {
        #[command(subcommand)]
        op: CubicOp,
    },
    /// Weighted energy runs of the reduced system.
    Energy {
        #[command(subcommand)]
        op: EnergyOp,
    },
}

#[derive(Debug, Subcommand)]
enum PolyOp {
    /// Hyperbolicity, roots and discriminant.
    Check(PolyArgs),
    /// Bézout matrix, symmetrizer residuals and det H against the discriminant.
    Symmetrize(PolyArgs),
    /// Nuij smoothing and the resulting root gap.
    Nuij(PolyArgs),
}

#[derive(Debug, Args)]
struct PolyArgs {
    /// Coefficients below the leading one, highest power first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<f64>>,
    /// Smoothing parameter for `nuij`.
    #[arg(long)]
    eps: Option<f64>,
    /// Test this many random hyperbolic polynomials instead.
    #[arg(long)]
    random: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CubicOp {
    /// Structural assumptions, conditions (E)/(H) and positivity lemmas.
    Conditions,
    /// Simple, double and triple characteristic points.
    Classify,
    /// Cutoff extension followed by a global structural re-check.
    Extend,
}

#[derive(Debug, Subcommand)]
enum EnergyOp {
    /// One forward run with inequality checks.
    Run,
    /// Feasibility scan over (N, γ, λ).
    Scan,
    /// Backward run of the adjoint system.
    Adjoint,
}

/// Shared state of one invocation.
pub struct Ctx {
    pub cfg: ExperimentConfig,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: OutDir,
}

fn load_config(path: &Option<PathBuf>) -> Result<ExperimentConfig, CliError> {
    match path {
        None => Ok(ExperimentConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            ExperimentConfig::from_json(&text)
        }
    }
}

fn apply_poly_args(cfg: &mut ExperimentConfig, a: &PolyArgs) {
    let sec = cfg.polynomial.get_or_insert_with(Default::default);
    if let Some(c) = &a.coeffs {
        sec.coeffs = c.clone();
    }
    if a.eps.is_some() {
        sec.eps = a.eps;
    }
    if a.random.is_some() {
        sec.random = a.random;
    }
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("--tol must be a positive number, got {t}")));
        }
    }
    let mut cfg = load_config(&cli.config)?;
    if let Command::Poly { op: PolyOp::Check(a) | PolyOp::Symmetrize(a) | PolyOp::Nuij(a) } = &cli.command {
        apply_poly_args(&mut cfg, a);
    }
    let mut ctx = Ctx {
        cfg,
        tol: cli.tol,
        seed: cli.seed,
        out: OutDir::new(cli.out.clone())?,
    };
    let report = match &cli.command {
        Command::Poly { op } => match op {
            PolyOp::Check(_) => poly::check(&mut ctx),
            PolyOp::Symmetrize(_) => poly::symmetrize(&mut ctx),
            PolyOp::Nuij(_) => poly::nuij(&mut ctx),
        },
        Command::Cubic { op } => match op {
            CubicOp::Conditions => cubic::conditions(&mut ctx),
            CubicOp::Classify => cubic::classify(&mut ctx),
            CubicOp::Extend => cubic::extend(&mut ctx),
        },
        Command::Energy { op } => match op {
            EnergyOp::Run => energy::run(&mut ctx, false),
            EnergyOp::Scan => energy::scan(&mut ctx),
            EnergyOp::Adjoint => energy::run(&mut ctx, true),
        },
    }?;
    if ctx.cfg.writes_report() {
        ctx.out.write(REPORT_FILE, report.to_json().as_bytes())?;
    }
    finish_meta(&mut ctx.out, cli, if report.holds { 0 } else { 2 })?;
    Ok(report)
}

static START: std::sync::OnceLock<(Instant, u128)> = std::sync::OnceLock::new();

fn finish_meta(out: &mut OutDir, cli: &Cli, exit_code: u8) -> Result<(), CliError> {
    if !out.enabled() {
        return Ok(());
    }
    let (start, unix) = START.get().copied().unwrap_or((Instant::now(), 0));
    let meta = RunMeta {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: std::env::args().collect(),
        seed: cli.seed,
        started_unix_ms: unix,
        elapsed_ms: start.elapsed().as_millis(),
        exit_code,
        files: out.written().to_vec(),
    };
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n";
    out.write(META_FILE, text.as_bytes())
}

fn main() -> ExitCode {
    let unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis());
    START.get_or_init(|| (Instant::now(), unix));
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(report) => {
            print!("{}", report.to_json());
            ExitCode::from(if report.holds { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("hypsym: {e}");
            if let Ok(mut out) = OutDir::new(cli.out.clone()) {
                let _ = finish_meta(&mut out, &cli, e.exit_code());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
