use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use vmrt_verify::config::OUT_DIR_ENV;
use vmrt_verify::{exit_code, run, write_reports, Format, Overrides, ScenarioConfig, VerifyError};

/// Run the VMRT verification suites and write structured and markdown reports.
///
/// Exit codes: 0 all suites pass, 1 a suite failed, 2 usage error,
/// 3 numerical failure, 4 output could not be written.
#[derive(Debug, Parser)]
#[command(name = "vmrt-verify", version)]
struct Cli {
    /// TOML scenario file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Suite to run (repeatable); overrides the file's list.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,

    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Overrides the agreement and angle tolerances.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,

    /// Output directory (also settable through VMRT_VERIFY_OUT).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn load(cli: &Cli) -> Result<ScenarioConfig, VerifyError> {
    let text = match &cli.config {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| VerifyError::Usage(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let ov = Overrides {
        suites: cli.suites.clone(),
        seed: cli.seed,
        tol: cli.tol,
        out: cli.out.clone(),
        format: cli.format,
    };
    let env_out = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    ScenarioConfig::assemble(text.as_deref(), env_out, &ov)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("vmrt-verify: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let report = run(&cfg);
    for s in &report.suites {
        eprintln!(
            "{:<14} {:>3}/{:<3} {}  ({:.2} s)",
            s.suite,
            s.summary.passed,
            s.summary.cases,
            if s.pass { "ok" } else { "FAIL" },
            s.runtime.as_secs_f64()
        );
    }
    match write_reports(&report, &cfg) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("vmrt-verify: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    }
    ExitCode::from(exit_code(&report) as u8)
}
