//! Scenario runner for the `vmrt-core` verification suites.
//!
//! A run reads a [`ScenarioConfig`], executes the selected suites and
//! writes `report.json` and/or `report.md` into the output directory.

pub mod config;
pub mod error;
pub mod report;
pub mod suites;

use std::path::PathBuf;

pub use config::{Format, Overrides, ScenarioConfig, Suite};
pub use error::VerifyError;
pub use report::{render_json, render_markdown, RunReport, SuiteReport};

pub fn run(config: &ScenarioConfig) -> RunReport {
    RunReport::new(config.clone(), suites::run(config))
}

/// Writes the reports selected by the config's format; returns their paths.
pub fn write_reports(report: &RunReport, config: &ScenarioConfig) -> Result<Vec<PathBuf>, VerifyError> {
    let dir = &config.out_dir;
    let io = |path: &PathBuf, source| VerifyError::Io { path: path.clone(), source };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    if matches!(config.format, Format::Structured | Format::Both) {
        let path = dir.join("report.json");
        std::fs::write(&path, render_json(report)).map_err(|e| io(&path, e))?;
        written.push(path);
    }
    if matches!(config.format, Format::Markdown | Format::Both) {
        let path = dir.join("report.md");
        std::fs::write(&path, render_markdown(report)).map_err(|e| io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// 0 when every suite passed, 3 on a numerical error, 1 otherwise.
pub fn exit_code(report: &RunReport) -> i32 {
    if report.numerical_error() {
        3
    } else if report.pass {
        0
    } else {
        1
    }
}
