//! `wdl`: build jump tables for the weighted divisor sum and run the
//! experiments on them, writing CSV and JSON reports.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use config::{ConfigError, Flags, RunConfig};
use report::{error_record, Report};

#[derive(Debug, Parser)]
#[command(name = "wdl", version, about = "Sign changes and moments of a weighted divisor sum")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Build (and cache) the jump table for normalised [0, 2T].
    Sieve,
    /// S at the raw points given by --points.
    Eval,
    /// Sign changes over the raw window (default [T, 2T]).
    Scan,
    /// Measure of raw [T, 2T] where ±S exceeds c5 (q1q2)^{3/4} t^{1/4}.
    Exceed,
    /// Single-sign runs in raw [T, 2T] and their length-L subintervals.
    Runs,
    /// Kernel identity on a grid in [√T, √(2T)].
    Kernel,
    /// Short-interval mean square I(T, h).
    Msq,
    /// Mean square of the largest increment over windows of length H0.
    Maxmsq,
    /// Moment of order k over normalised [1, T].
    Moments,
    /// Omega witness for the k-th moment error term.
    Omega,
    /// Bessel series partial sums against the exact value.
    #[command(name = "bessel-check")]
    BesselCheck,
    /// Mean-square residual of the truncated Voronoi series.
    Voronoi,
    /// Oracle equivalence and symmetry checks.
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Sieve => "sieve",
            Command::Eval => "eval",
            Command::Scan => "scan",
            Command::Exceed => "exceed",
            Command::Runs => "runs",
            Command::Kernel => "kernel",
            Command::Msq => "msq",
            Command::Maxmsq => "maxmsq",
            Command::Moments => "moments",
            Command::Omega => "omega",
            Command::BesselCheck => "bessel-check",
            Command::Voronoi => "voronoi",
            Command::Selftest => "selftest",
        }
    }

    fn run(self, cfg: &RunConfig) -> anyhow::Result<Report> {
        match self {
            Command::Sieve => commands::sieve(cfg),
            Command::Eval => commands::eval(cfg),
            Command::Scan => commands::scan(cfg),
            Command::Exceed => commands::exceed(cfg),
            Command::Runs => commands::runs(cfg),
            Command::Kernel => commands::kernel(cfg),
            Command::Msq => commands::msq(cfg),
            Command::Maxmsq => commands::maxmsq(cfg),
            Command::Moments => commands::moments(cfg),
            Command::Omega => commands::omega(cfg),
            Command::BesselCheck => commands::bessel_check(cfg),
            Command::Voronoi => commands::voronoi(cfg),
            Command::Selftest => commands::selftest(cfg),
        }
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    if let Some(e) = e.downcast_ref::<wdl_core::Error>() {
        e.kind()
    } else if e.is::<ConfigError>() {
        "config"
    } else if e.is::<std::io::Error>() {
        "io"
    } else {
        "internal"
    }
}

fn setup_threads(threads: usize) -> anyhow::Result<()> {
    if threads == 1 {
        wdl_core::par::set_exec(wdl_core::par::Exec::Sequential);
    } else if threads > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let env_threads = std::env::var("WDL_THREADS").ok();
    let cfg = RunConfig::resolve(&cli.flags, env_threads.as_deref())?;
    setup_threads(cfg.threads)?;
    let report = cli.command.run(&cfg)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let stem = cfg.out.clone().unwrap_or_else(|| PathBuf::from(cli.command.name()));
    let (csv, json) = report.write(&stem, &cfg)?;
    info!("wrote {} and {}", csv.display(), json.display());
    let mut out = std::io::stdout().lock();
    match out.write_all(report.csv().as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}", error_record("check_failed", &format!("{} reported failing checks", cli.command.name())));
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("{}", error_record(error_kind(&e), &format!("{e:#}")));
            ExitCode::FAILURE
        }
    }
}
