//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 output failure, 2 parse, 3 validation, 4 dimension,
//! 5 a bound was violated.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{Bound, BoundReport};
use crate::ensembles::{verify_suite_with, BrokenBound, EnsembleConfig, VerificationReport};
use crate::error::Error;
use crate::examples::{sweep_grid, ClosedFormValues, ExampleConfig, ExampleId, SweepRow};
use crate::serial::{load_channel, load_state};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "channel-uncertainty",
    version,
    about = "Uncertainty bounds for quantum channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every bound for a state and two channels read from JSON files
    Compute(ComputeArgs),
    /// Evaluate a built-in example over a (p, q) grid and write CSV
    Sweep(SweepArgs),
    /// Check all bounds on seeded random instances
    Verify(VerifyArgs),
    /// Numeric bounds next to the closed forms for one built-in example point
    Example(ExampleArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub channel_a: PathBuf,
    #[arg(long)]
    pub channel_b: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub basis_index: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// werner or rho_theta
    #[arg(long)]
    pub example: String,
    /// State parameter; defaults to the value the closed forms are stated for
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 21)]
    pub grid_steps: usize,
    #[arg(long, default_value_t = 0)]
    pub basis_index: usize,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One or more dimensions
    #[arg(long, num_args = 1.., default_values_t = [2, 3, 4])]
    pub dim: Vec<usize>,
    /// Largest Kraus count per channel
    #[arg(long, default_value_t = 3)]
    pub kraus: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Inflate thm4 tenfold to confirm violations are detected
    #[arg(long)]
    pub self_test: bool,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[arg(long)]
    pub example: String,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 0)]
    pub basis_index: usize,
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::DimensionMismatch { .. } => EXIT_DIMENSION,
            Error::Verification { .. } => EXIT_VERIFICATION,
            _ => EXIT_VALIDATION,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn io_error(e: impl std::fmt::Display) -> CliError {
    CliError {
        code: EXIT_IO,
        message: e.to_string(),
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Compute(a) => cmd_compute(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Example(a) => cmd_example(&a, out),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::result::Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io_error)?;
    writeln!(out).map_err(io_error)
}

pub fn cmd_compute(args: &ComputeArgs, out: &mut dyn Write) -> CliResult {
    let rho = load_state(&args.state)?;
    let phi = load_channel(&args.channel_a)?;
    let psi = load_channel(&args.channel_b)?;
    let report = BoundReport::evaluate(&rho, &phi, &psi, args.basis_index)?;
    write_json(out, &report)?;
    let violations = report.violations();
    if violations.is_empty() {
        Ok(EXIT_OK)
    } else {
        for (bound, slack) in violations {
            eprintln!("violated: {bound} (slack {slack:e})");
        }
        Ok(EXIT_VERIFICATION)
    }
}

pub const SWEEP_COLUMNS: [&str; 12] = [
    "p",
    "q",
    "u_phi",
    "u_psi",
    "product_u",
    "sum_u2",
    "thm1",
    "thm2",
    "thm3",
    "lb_eq13",
    "lb1_eq14",
    "thm4",
];

pub const CLOSED_COLUMNS: [&str; 4] = ["closed_thm3", "closed_lb", "closed_lb1", "closed_lb2"];

/// Fixed 17-significant-digit scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn sweep_record(row: &SweepRow, with_closed: bool) -> Vec<String> {
    let r = &row.report;
    let mut vals = vec![
        row.p,
        row.q,
        r.u_phi,
        r.u_psi,
        r.lhs_product_u,
        r.lhs_sum_u2,
        r.thm1,
        r.thm2,
        r.thm3,
        r.lb_eq13,
        r.lb1_eq14,
        r.thm4,
    ];
    if with_closed {
        let c = row.closed.expect("closed forms present");
        vals.extend([c.thm3_closed, c.lb_closed, c.lb1_closed, c.lb2_closed]);
    }
    vals.into_iter().map(format_float).collect()
}

/// Writes the sweep table as CSV.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> csv::Result<()> {
    let with_closed = rows.first().is_some_and(|r| r.closed.is_some());
    let mut writer = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = SWEEP_COLUMNS.to_vec();
    if with_closed {
        header.extend(CLOSED_COLUMNS);
    }
    writer.write_record(&header)?;
    for row in rows {
        writer.write_record(sweep_record(row, with_closed))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult {
    let example: ExampleId = args.example.parse()?;
    let theta = args.theta.unwrap_or_else(|| example.closed_form_theta());
    let rows = sweep_grid(example, theta, args.grid_steps, args.basis_index)?;
    match &args.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| io_error(format!("{}: {e}", path.display())))?;
            write_sweep_csv(&rows, io::BufWriter::new(file)).map_err(io_error)?;
        }
        None => write_sweep_csv(&rows, &mut *out).map_err(io_error)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let broken = args.self_test.then_some(BrokenBound {
        bound: Bound::Thm4,
        factor: 10.0,
    });
    let reports = args
        .dim
        .iter()
        .map(|&dim| {
            let cfg = EnsembleConfig::new(dim, args.kraus, args.seed, args.trials)?;
            verify_suite_with(&cfg, broken)
        })
        .collect::<crate::Result<Vec<VerificationReport>>>()?;
    write_json(out, &reports)?;
    if reports.iter().all(VerificationReport::passed) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFICATION)
    }
}

#[derive(Debug, Serialize)]
struct ClosedFormDiffs {
    thm3: f64,
    lb: f64,
    lb1: f64,
    lb2: f64,
}

#[derive(Debug, Serialize)]
struct ExampleOutput {
    config: ExampleConfig,
    numeric: BoundReport,
    closed: Option<ClosedFormValues>,
    abs_diff: Option<ClosedFormDiffs>,
}

pub fn cmd_example(args: &ExampleArgs, out: &mut dyn Write) -> CliResult {
    let example: ExampleId = args.example.parse()?;
    let theta = args.theta.unwrap_or_else(|| example.closed_form_theta());
    let config = ExampleConfig::new(example, theta, args.p, args.q)?;
    let numeric = config.report(args.basis_index)?;
    let closed = if theta == example.closed_form_theta() {
        Some(example.closed_forms(args.p, args.q)?)
    } else {
        None
    };
    let abs_diff = closed.map(|c| ClosedFormDiffs {
        thm3: (numeric.thm3 - c.thm3_closed).abs(),
        lb: (numeric.lb_eq13 - c.lb_closed).abs(),
        lb1: (numeric.lb1_eq14 - c.lb1_closed).abs(),
        lb2: (numeric.thm4 - c.lb2_closed).abs(),
    });
    write_json(
        out,
        &ExampleOutput {
            config,
            numeric,
            closed,
            abs_diff,
        },
    )?;
    Ok(EXIT_OK)
}
