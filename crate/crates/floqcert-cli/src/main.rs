//! Batch front end for the floqcert toolkit.

mod commands;
mod config;
mod registry;
mod report;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "floqcert",
    version,
    about = "Certified spectral collocation for linear periodic ODEs/DDEs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for report.json and data files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Collocation degree N.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Eigenvalue floor delta in (0,1).
    #[arg(long, global = true)]
    delta: Option<f64>,

    /// Semiminor axis of the regularity ellipse.
    #[arg(long = "ellipse-s", global = true)]
    ellipse_s: Option<f64>,

    /// Problem parameter override, repeatable: --param a=-1.1
    #[arg(long = "param", global = true)]
    params: Vec<String>,

    /// Worker threads (also FLOQCERT_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an initial value problem and certify the solution error.
    Solve,
    /// Build the monodromy matrix and certify its Floquet multipliers.
    Certify,
    /// Raster a stability chart over a parameter plane.
    Chart,
    /// Compute a fundamental-solution bound with its bootstrap history.
    Bound,
}

fn main() -> Result<()> {
    let cli = Cli::parse();

    let mut file = match &cli.config {
        Some(path) => config::load_file(path)?,
        None => config::FileConfig::default(),
    };
    config::apply_param_flags(&mut file, &cli.params)?;
    let eff = registry::resolve(&file, cli.n, cli.delta, cli.ellipse_s, cli.workers)?;

    rayon::ThreadPoolBuilder::new()
        .num_threads(eff.workers)
        .build_global()
        .context("stage: setup (thread pool)")?;

    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("stage: setup (creating {})", cli.out.display()))?;

    match cli.command {
        Command::Solve => commands::cmd_solve(&eff, &cli.out),
        Command::Certify => commands::cmd_certify(&eff, &cli.out),
        Command::Chart => commands::cmd_chart(&eff, &cli.out),
        Command::Bound => commands::cmd_bound(&eff, &cli.out),
    }
}
