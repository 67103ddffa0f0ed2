//! `dp3`: verify the dP3 matching formula, compute cluster variables,
//! export diamonds and manage the calibration cache.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dp3_core::diamonds::{build_diamond, ExportFormat, HalfOrder};
use dp3_core::quiver::{recurrence_y, Seed, MUTATION_PERIOD};
use dp3_core::tiling::{self, CalibrationFile, Tiling};
use dp3_core::verify::{self, Suite};
use dp3_core::Poly;
use num_bigint::BigInt;
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "dp3", version, about = "Cluster variables of the dP3 quiver as weighted perfect matchings")]
struct Cli {
    /// Calibration cache file (created on first use).
    #[arg(long, global = true, value_name = "PATH")]
    calibration: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        max_half_order: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Report every runtime as zero so that output is reproducible.
        #[arg(long)]
        no_timings: bool,
    },
    /// Compute y_N or y'_N.
    Compute {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum, default_value = "recurrence")]
        via: Via,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Write a diamond as JSON, DOT or SVG.
    Export {
        #[arg(long)]
        half_order: u32,
        #[arg(long)]
        primed: bool,
        #[arg(long, value_enum)]
        format: ExportArg,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Show the calibration, running the search if needed.
    Calibrate {
        /// Search again even when a cached calibration exists.
        #[arg(long)]
        recalibrate: bool,
        /// Also write the calibration file here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Theorem,
    Counts,
    Recursions,
    Quiver,
    Oracle,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Theorem => Suite::Theorem,
            SuiteArg::Counts => Suite::Counts,
            SuiteArg::Recursions => Suite::Recursions,
            SuiteArg::Quiver => Suite::Quiver,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Y,
    Yp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Recurrence,
    Seed,
    Matchings,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportArg {
    Json,
    Dot,
    Svg,
}

impl From<ExportArg> for ExportFormat {
    fn from(f: ExportArg) -> Self {
        match f {
            ExportArg::Json => ExportFormat::Json,
            ExportArg::Dot => ExportFormat::Dot,
            ExportArg::Svg => ExportFormat::Svg,
        }
    }
}

/// Settings shared by the subcommands.
#[derive(Clone, Debug)]
struct Config {
    max_half_order: u32,
    calibration: PathBuf,
    format: OutputFormat,
}

/// Failure that maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn load_tiling(cfg: &Config) -> Result<Tiling, UsageError> {
    let (t, fresh) = tiling::load_or_calibrate(&cfg.calibration, false)?;
    if fresh {
        eprintln!("calibrated and cached at {}", cfg.calibration.display());
    }
    Ok(t)
}

fn cmd_verify(cfg: &Config, suite: Suite, no_timings: bool) -> Result<u8, UsageError> {
    let t = load_tiling(cfg)?;
    let mut report = verify::run_suite(suite, &t, cfg.max_half_order);
    if no_timings {
        for c in &mut report.checks {
            c.runtime_ms = 0.0;
        }
    }
    match cfg.format {
        OutputFormat::Text => print!("{}", report.to_text()),
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(if report.passed { 0 } else { EXIT_FAIL })
}

fn via_seed(n: i64, primed: bool) -> Result<Poly, UsageError> {
    if n <= 0 {
        // the initial cluster, in the order the sequence replaces it
        let step = 2 * (n + 2) as usize + usize::from(primed);
        return Ok(Seed::<BigInt>::initial().cluster[MUTATION_PERIOD[step] - 1].clone());
    }
    let pairs = verify::y_via_seeds(n as u32)?;
    let (y, yp) = pairs.into_iter().last().ok_or_else(|| UsageError("empty sequence".into()))?;
    Ok(if primed { yp } else { y })
}

fn cmd_compute(cfg: &Config, target: Target, n: i64, via: Via) -> Result<u8, UsageError> {
    let primed = target == Target::Yp;
    let min = if via == Via::Matchings { 1 } else { -2 };
    if n < min {
        return Err(UsageError(format!("--n must be at least {min} for this route")));
    }
    let poly = match via {
        Via::Recurrence => {
            let (y, yp) = recurrence_y(n)?;
            if primed { yp } else { y }
        }
        Via::Seed => via_seed(n, primed)?,
        Via::Matchings => {
            let half_order = u32::try_from(n)?;
            verify::y_via_matchings(&load_tiling(cfg)?, half_order, primed)?
        }
    };
    let ones: [BigInt; 6] = std::array::from_fn(|_| BigInt::from(1));
    let at_ones = poly.eval(&ones);
    let name = format!("y{}_{n}", if primed { "'" } else { "" });
    match cfg.format {
        OutputFormat::Text => {
            println!("{name} = {poly}");
            println!("terms: {}", poly.len());
            println!("at all ones: {at_ones}");
        }
        OutputFormat::Json => {
            let v = json!({
                "target": if primed { "yp" } else { "y" },
                "n": n,
                "via": format!("{via:?}").to_lowercase(),
                "polynomial": poly.to_string(),
                "terms": poly.len(),
                "value_at_ones": at_ones.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
    }
    Ok(0)
}

fn cmd_export(cfg: &Config, half_order: u32, primed: bool, format: ExportFormat, out: &PathBuf) -> Result<u8, UsageError> {
    let g = build_diamond(&load_tiling(cfg)?, HalfOrder(half_order), primed);
    std::fs::write(out, format.render(&g)).map_err(|e| UsageError(format!("{}: {e}", out.display())))?;
    Ok(0)
}

fn cmd_calibrate(cfg: &Config, recalibrate: bool, out: Option<&PathBuf>) -> Result<u8, UsageError> {
    let (t, fresh) = tiling::load_or_calibrate(&cfg.calibration, recalibrate)?;
    let file = CalibrationFile::from_tiling(&t);
    if let Some(path) = out {
        file.save(path)?;
    }
    eprintln!(
        "{} {}",
        if fresh { "calibrated; cached at" } else { "loaded from" },
        cfg.calibration.display()
    );
    print!("{}", file.to_json());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, UsageError> {
    let mut cfg = Config {
        max_half_order: 8,
        calibration: cli.calibration.unwrap_or_else(tiling::default_calibration_path),
        format: OutputFormat::Text,
    };
    match cli.command {
        Command::Verify { suite, max_half_order, format, no_timings } => {
            cfg.max_half_order = max_half_order;
            cfg.format = format;
            cmd_verify(&cfg, suite.into(), no_timings)
        }
        Command::Compute { target, n, via, format } => {
            cfg.format = format;
            cmd_compute(&cfg, target, n, via)
        }
        Command::Export { half_order, primed, format, out } => cmd_export(&cfg, half_order, primed, format.into(), &out),
        Command::Calibrate { recalibrate, out } => cmd_calibrate(&cfg, recalibrate, out.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
