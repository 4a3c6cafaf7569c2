//! Report types and their JSON and markdown renderings.
//!
//! Floats are rounded to six significant digits before serialization, and
//! every struct serializes its fields in declaration order, so equal runs
//! give equal bytes. Timings are kept out of the structured output.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Serialize, Serializer};

use crate::config::ScenarioConfig;

/// `x` rounded to six significant digits.
pub fn sig6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn ser_sig6<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(sig6(*x))
    } else {
        s.serialize_str(&format!("{x}"))
    }
}

fn fmt_sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let r = sig6(x);
    if r == r.trunc() && r.abs() < 1e6 {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// How a metric value is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "op", content = "value", rename_all = "snake_case")]
pub enum Bound {
    Le(#[serde(serialize_with = "ser_sig6")] f64),
    Ge(#[serde(serialize_with = "ser_sig6")] f64),
    Eq(#[serde(serialize_with = "ser_sig6")] f64),
    Gt(#[serde(serialize_with = "ser_sig6")] f64),
    /// Reported only.
    Info,
}

impl Bound {
    pub fn holds(self, v: f64) -> bool {
        match self {
            Bound::Le(b) => v <= b,
            Bound::Ge(b) => v >= b,
            Bound::Eq(b) => v == b,
            Bound::Gt(b) => v > b,
            Bound::Info => true,
        }
    }

    fn describe(self) -> String {
        match self {
            Bound::Le(b) => format!("<= {}", fmt_sig6(b)),
            Bound::Ge(b) => format!(">= {}", fmt_sig6(b)),
            Bound::Eq(b) => format!("== {}", fmt_sig6(b)),
            Bound::Gt(b) => format!("> {}", fmt_sig6(b)),
            Bound::Info => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    #[serde(serialize_with = "ser_sig6")]
    pub value: f64,
    pub bound: Bound,
    pub pass: bool,
}

/// Parameters identifying a case.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CaseParams {
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub index: usize,
    pub params: CaseParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stratum: Option<String>,
    pub pass: bool,
    pub metrics: Vec<Metric>,
    /// Names of the metrics outside their bounds.
    pub failing: Vec<String>,
    pub diagnostics: Vec<String>,
    /// Set when the case stopped on a numerical error.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub numerical_error: bool,
}

impl CaseReport {
    pub fn new(params: CaseParams, stratum: Option<&str>) -> Self {
        CaseReport {
            index: 0,
            params,
            stratum: stratum.map(str::to_owned),
            pass: true,
            metrics: Vec::new(),
            failing: Vec::new(),
            diagnostics: Vec::new(),
            numerical_error: false,
        }
    }

    pub fn metric(&mut self, name: &str, value: f64, bound: Bound) {
        let pass = bound.holds(value);
        if !pass {
            self.pass = false;
            self.failing.push(name.to_owned());
        }
        self.metrics.push(Metric { name: name.to_owned(), value, bound, pass });
    }

    pub fn count(&mut self, name: &str, value: usize, bound: Bound) {
        self.metric(name, value as f64, bound);
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    /// Marks the case failed by an error from the numerics or the caller.
    pub fn error(&mut self, err: &vmrt_core::Error) {
        self.pass = false;
        self.numerical_error |= err.is_numerical();
        self.failing.push("error".into());
        self.note(format!("error: {err}"));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub summary: Summary,
    pub cases: Vec<CaseReport>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl SuiteReport {
    pub fn from_cases(suite: &str, mut cases: Vec<CaseReport>, runtime: Duration) -> Self {
        for (i, c) in cases.iter_mut().enumerate() {
            c.index = i;
        }
        let passed = cases.iter().filter(|c| c.pass).count();
        SuiteReport {
            suite: suite.to_owned(),
            pass: passed == cases.len(),
            summary: Summary { cases: cases.len(), passed, failed: cases.len() - passed },
            cases,
            runtime,
        }
    }

    pub fn numerical_error(&self) -> bool {
        self.cases.iter().any(|c| c.numerical_error)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ScenarioConfig,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl RunReport {
    pub fn new(config: ScenarioConfig, suites: Vec<SuiteReport>) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            pass: suites.iter().all(|s| s.pass),
            config,
            suites,
        }
    }

    pub fn numerical_error(&self) -> bool {
        self.suites.iter().any(|s| s.numerical_error())
    }
}

pub fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn params_cell(p: &CaseParams) -> String {
    let mut s = p.model.clone();
    if let Some(v) = &p.variant {
        let _ = write!(s, " [{v}]");
    }
    s
}

pub fn render_markdown(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} report\n", report.tool);
    let _ = writeln!(out, "- version: {}", report.version);
    let _ = writeln!(out, "- seed: {}", report.config.seed);
    let _ = writeln!(out, "- overall: {}\n", if report.pass { "PASS" } else { "FAIL" });
    let _ = writeln!(out, "| suite | cases | passed | failed | status | runtime |");
    let _ = writeln!(out, "|---|---|---|---|---|---|");
    for s in &report.suites {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {:.2} s |",
            s.suite,
            s.summary.cases,
            s.summary.passed,
            s.summary.failed,
            if s.pass { "PASS" } else { "FAIL" },
            s.runtime.as_secs_f64()
        );
    }
    for s in &report.suites {
        let _ = writeln!(out, "\n## {}\n", s.suite);
        let _ = writeln!(out, "| # | case | stratum | status | metrics | failing |");
        let _ = writeln!(out, "|---|---|---|---|---|---|");
        for c in &s.cases {
            let metrics: Vec<String> = c
                .metrics
                .iter()
                .map(|m| {
                    let b = m.bound.describe();
                    if b.is_empty() {
                        format!("{}={}", m.name, fmt_sig6(m.value))
                    } else {
                        format!("{}={} ({b})", m.name, fmt_sig6(m.value))
                    }
                })
                .collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                c.index,
                params_cell(&c.params),
                c.stratum.as_deref().unwrap_or("-"),
                if c.pass { "PASS" } else { "**FAIL**" },
                metrics.join("; "),
                if c.failing.is_empty() { "-".to_owned() } else { format!("**{}**", c.failing.join(", ")) }
            );
        }
        let notes: Vec<_> = s.cases.iter().filter(|c| !c.diagnostics.is_empty()).collect();
        if !notes.is_empty() {
            let _ = writeln!(out);
            for c in notes {
                for d in &c.diagnostics {
                    let _ = writeln!(out, "- case {}: {d}", c.index);
                }
            }
        }
    }
    out
}
