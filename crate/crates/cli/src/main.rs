//! `qal`: solve, scan and analyze the H2+ ground state from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qal", version, about = "Ground state of H2+ by separation, finite differences and Gaussians")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Exact,
    Variational,
    Oracle,
}

impl Solver {
    fn label(self) -> &'static str {
        match self {
            Solver::Exact => "exact",
            Solver::Variational => "variational",
            Solver::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve at a single internuclear distance.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Energy curve from the separated solver.
    #[command(allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Density on a meridian-plane grid plus the axial profile.
    #[command(allow_negative_numbers = true)]
    Density(DensityArgs),
    /// Axial density topology over a range of R.
    #[command(allow_negative_numbers = true)]
    Topology(TopologyArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[arg(long, value_enum, default_value_t = Solver::Exact)]
    solver: Solver,

    /// Basis file (required for the variational solver).
    #[arg(long)]
    basis: Option<PathBuf>,

    /// Energy tolerance of the separated solver, Hartree.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Overlap eigenvalue drop threshold for the variational solver.
    #[arg(long, default_value_t = qal_core::gaussian::DEFAULT_TAU)]
    tau: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Internuclear distance, Bohr.
    #[arg(long = "R")]
    r: f64,

    #[command(flatten)]
    source: SourceArgs,

    /// Coarsest oracle grid, radial cells.
    #[arg(long, default_value_t = 40)]
    n_xi: usize,

    /// Coarsest oracle grid, angular cells.
    #[arg(long, default_value_t = 24)]
    n_eta: usize,

    /// Number of nested oracle grids.
    #[arg(long, default_value_t = 3)]
    levels: u32,

    /// Output file (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long)]
    rmin: f64,

    #[arg(long)]
    rmax: f64,

    #[arg(long)]
    steps: usize,

    #[arg(long, value_enum, default_value_t = Spacing::Lin)]
    spacing: Spacing,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    range: RangeArgs,

    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Output file (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Internuclear distance, Bohr
    #[arg(long = "R")]
    r: f64,

    #[command(flatten)]
    source: SourceArgs,

    /// Grid points across x in [0, half width].
    #[arg(long, default_value_t = 301)]
    nx: usize,

    /// Grid points across z in [-half width, half width] (odd).
    #[arg(long, default_value_t = 601)]
    nz: usize,

    /// Half width of the grid, Bohr (default R/2 + 5).
    #[arg(long)]
    half_width: Option<f64>,

    /// Grid file; the axial profile goes to axis.csv beside it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TopologyArgs {
    #[command(flatten)]
    range: RangeArgs,

    #[command(flatten)]
    source: SourceArgs,

    /// Output file (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Bad flags or inconsistent configuration.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    PartialFailure,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("QAL_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| usage(format!("QAL_THREADS must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return Err(usage("QAL_THREADS must be a positive integer"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    configure_threads()?;
    match cli.cmd {
        Command::Solve(a) => commands::solve(&a, cli.format),
        Command::Scan(a) => commands::scan(&a, cli.format),
        Command::Density(a) => commands::density(&a, cli.format),
        Command::Topology(a) => commands::topology(&a, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::PartialFailure) => ExitCode::from(3),
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            eprintln!("run `qal --help` for usage");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("numerical failure: {e:#}");
            ExitCode::from(2)
        }
    }
}
