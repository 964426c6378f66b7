use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tdirac_core::{Error, Result};
use tdirac_workbench::acceptance::run_suite;
use tdirac_workbench::config::{Format, RunConfig};
use tdirac_workbench::run::run;
use tdirac_workbench::{exit_code, EXIT_FAILED_CHECKS, EXIT_OK};

/// Run a single computation from a JSON config, or an acceptance suite.
#[derive(Debug, Parser)]
#[command(name = "tdirac", version)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, conflicts_with = "suite")]
    config: Option<PathBuf>,
    /// Report file; overrides `out` in the config. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Eigenvalue merge tolerance.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Worker threads for parallel sub-computations.
    #[arg(long)]
    threads: Option<usize>,
    /// Acceptance suite: clifford, spectra, transversal, cohomology, euler or all.
    #[arg(long)]
    suite: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Error::InvalidArgument("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }
    if let Some(suite) = cli.suite {
        let report = run_suite(&suite)?;
        print!("{}", report.table());
        return Ok(if report.all_passed() { EXIT_OK } else { EXIT_FAILED_CHECKS });
    }
    let Some(path) = cli.config else {
        return Err(Error::InvalidArgument("either --config or --suite is required".into()));
    };
    let mut cfg = RunConfig::load(&path)?;
    if let Some(tol) = cli.tol {
        cfg = cfg.with_tol(tol)?;
    }
    if let Some(format) = cli.format {
        cfg.format = Some(format);
    }
    let text = run(&cfg)?;
    match cli.out.or(cfg.out) {
        Some(out) => std::fs::write(&out, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", out.display())))?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}
