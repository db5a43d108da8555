//! Run reports and their JSON / table emission.

use cone_rcb::report::{Check, Status};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub name: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Wall time of the batch that produced the record; only with `--timings`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl Record {
    pub fn from_check(c: Check, prefix: Option<&str>) -> Self {
        let name = match prefix {
            Some(p) => format!("{p}: {}", c.name),
            None => c.name,
        };
        Self { name, status: c.status, residual: c.residual, tolerance: c.tolerance, detail: c.detail, runtime_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.passed() { "pass" } else { "fail" };
        write!(f, "{}: {s}", self.name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub config: serde_json::Value,
    pub records: Vec<Record>,
    /// Suite-specific numbers (isometry ratio, c(mu), ...), flattened into
    /// the top level of the JSON object.
    #[serde(flatten)]
    pub summary: serde_json::Map<String, serde_json::Value>,
}

impl RunReport {
    pub fn new(suite: &str, seed: u64, config: serde_json::Value) -> Self {
        Self { suite: suite.into(), seed, pass: true, config, records: Vec::new(), summary: Default::default() }
    }

    pub fn push(&mut self, r: Record) {
        self.pass &= r.passed();
        self.records.push(r);
    }

    pub fn extend(&mut self, checks: Vec<Check>, prefix: Option<&str>, runtime_ms: Option<f64>) {
        for c in checks {
            let mut r = Record::from_check(c, prefix);
            r.runtime_ms = runtime_ms;
            self.push(r);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(Record::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn emit(&self, format: Format, color: bool) -> String {
        match format {
            Format::Json => emit_json(self),
            Format::Table => emit_table(&self.records, color),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Pretty JSON with a trailing newline. A report without records is `[]`.
pub fn emit_json(report: &RunReport) -> String {
    if report.records.is_empty() {
        return "[]\n".into();
    }
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn emit_table(records: &[Record], color: bool) -> String {
    if records.is_empty() {
        return String::new();
    }
    let width = records.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for r in records {
        let tag = match (r.passed(), color) {
            (true, true) => "\x1b[32mPASS\x1b[0m",
            (false, true) => "\x1b[31mFAIL\x1b[0m",
            (true, false) => "PASS",
            (false, false) => "FAIL",
        };
        out.push_str(&format!("{tag}  {:<width$}  {:>10.3e} <= {:<8.1e}", r.name, r.residual, r.tolerance));
        if let Some(ms) = r.runtime_ms {
            out.push_str(&format!("  {ms:>9.1} ms"));
        }
        if let Some(d) = &r.detail {
            out.push_str("  ");
            out.push_str(d);
        }
        out.push('\n');
    }
    let failed = records.iter().filter(|r| !r.passed()).count();
    out.push_str(&format!("{} checks, {} failed\n", records.len(), failed));
    out
}
