use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use nodal_theta::config::RunConfig;
use nodal_theta::suites::{self, Report};
use nodal_theta::Error;

/// Numerical checks of generalized theta functions and Jacobi inversion
/// on a nodal curve of arithmetic genus two.
#[derive(Debug, Parser)]
#[command(name = "nodal-theta", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `run.out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `run.samples`.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Identities,
    Periods,
    Thm51,
    Thm66,
    ZerosetPlot,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn threads() -> Result<(), String> {
    let Ok(v) = std::env::var("NODAL_THETA_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("NODAL_THETA_THREADS: not a positive integer: {v:?}"))?;
    if n == 0 {
        return Err("NODAL_THETA_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cli: &Cli, cfg: &RunConfig) -> nodal_theta::Result<Report> {
    match cli.command {
        Command::Identities => suites::identities::run(cfg),
        Command::Periods => suites::periods::run(cfg),
        Command::Thm51 => suites::thm51::run(cfg),
        Command::Thm66 => suites::thm66::run(cfg),
        Command::ZerosetPlot => suites::plot::run(cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    let mut cfg = match RunConfig::from_file(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.samples {
        cfg.samples = n;
    }

    let start = Instant::now();
    let report = match run(&cli, &cfg) {
        Ok(r) => r,
        Err(e @ (Error::Config(_) | Error::InvalidParameter(_))) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    if let Err(e) = report.write(&cfg.out) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    for line in &report.log {
        println!("{line}");
    }
    for c in &report.checks {
        let verdict = if c.pass() { "PASS" } else { "FAIL" };
        let kind = if c.gating { "" } else { " (diagnostic)" };
        let op = if c.below { "<" } else { ">" };
        println!("{verdict} {}{kind}: {:.3e} {op} {:.1e}", c.name, c.value, c.tolerance);
    }
    eprintln!("elapsed {:.2} s", start.elapsed().as_secs_f64());
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
