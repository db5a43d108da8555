//! The orchestrated verification suites behind `verify` and [`run_suite`].

use crate::report::RunReport;
use cone_rcb::jordan::{checks::JordanCheckConfig, Algebra};
use cone_rcb::{bergman, jordan, rcb, sharp, special, Exec};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::time::Instant;

pub const SUITES: [&str; 6] = ["jordan", "gamma", "rcb", "bergman", "sharp", "all"];

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (expected one of jordan, gamma, rcb, bergman, sharp, all)")]
    Unknown(String),
    #[error("invalid {suite} config: {msg}")]
    Config { suite: String, msg: String },
}

/// Settings that are not part of any module config.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Overrides any `seed` key in the config.
    pub seed: Option<u64>,
    pub exec: Exec,
    /// Attach wall times to records. Breaks byte-for-byte reproducibility.
    pub timings: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JordanSuiteConfig {
    /// `kind:n` descriptors; empty means the whole catalogue.
    pub algebras: Vec<String>,
    pub trials: usize,
    pub tol: f64,
    pub det_b_tol: f64,
    pub det_b_points: usize,
}

impl Default for JordanSuiteConfig {
    fn default() -> Self {
        let d = JordanCheckConfig::default();
        Self { algebras: Vec::new(), trials: d.trials, tol: d.tol, det_b_tol: d.det_b_tol, det_b_points: d.det_b_points }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SharpSuiteConfig {
    pub sharp: sharp::SharpConfig,
    pub cmu: sharp::CmuConfig,
}

fn parse<T: DeserializeOwned>(suite: &str, v: Value) -> Result<T, SuiteError> {
    serde_json::from_value(v).map_err(|e| SuiteError::Config { suite: suite.into(), msg: e.to_string() })
}

/// Splits off the `seed` key; everything else belongs to the module.
fn take_seed(suite: &str, config: &Value) -> Result<(Option<u64>, Value), SuiteError> {
    match config {
        Value::Null => Ok((None, json!({}))),
        Value::Object(m) => {
            let mut m = m.clone();
            let seed = match m.remove("seed") {
                None => None,
                Some(s) => Some(s.as_u64().ok_or_else(|| SuiteError::Config { suite: suite.into(), msg: "seed must be a non-negative integer".into() })?),
            };
            Ok((seed, Value::Object(m)))
        }
        _ => Err(SuiteError::Config { suite: suite.into(), msg: "config must be a JSON object".into() }),
    }
}

fn echo<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("config serializes")
}

fn to_map<T: Serialize>(t: &T) -> Map<String, Value> {
    match serde_json::to_value(t).expect("summary serializes") {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn timed<T>(opts: &RunOptions, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let t = Instant::now();
    let out = f();
    (out, opts.timings.then(|| t.elapsed().as_secs_f64() * 1e3))
}

pub fn run_jordan(cfg: &JordanSuiteConfig, seed: u64, opts: &RunOptions) -> Result<RunReport, SuiteError> {
    let algs: Vec<Algebra> = if cfg.algebras.is_empty() {
        Algebra::catalogue()
    } else {
        cfg.algebras
            .iter()
            .map(|s| s.parse().map_err(|e: cone_rcb::Error| SuiteError::Config { suite: "jordan".into(), msg: e.to_string() }))
            .collect::<Result<_, _>>()?
    };
    let mut report = RunReport::new("jordan", seed, echo(cfg));
    let core = JordanCheckConfig { trials: cfg.trials, tol: cfg.tol, det_b_tol: cfg.det_b_tol, det_b_points: cfg.det_b_points, seed, exec: opts.exec };
    for alg in algs {
        let (checks, ms) = timed(opts, || jordan::checks::run(alg, &core));
        report.extend(checks, None, ms);
    }
    Ok(report)
}

pub fn run_gamma(cfg: &special::GammaConfig, seed: u64, opts: &RunOptions) -> RunReport {
    let mut report = RunReport::new("gamma", seed, echo(cfg));
    let (checks, ms) = timed(opts, || special::run(cfg));
    report.extend(checks, None, ms);
    report
}

pub fn run_rcb(cfg: &rcb::RcbConfig, seed: u64, opts: &RunOptions) -> RunReport {
    let cfg = rcb::RcbConfig { seed, exec: opts.exec, ..cfg.clone() };
    let mut report = RunReport::new("rcb", seed, echo(&cfg));
    let (checks, ms) = timed(opts, || rcb::checks::run(&cfg));
    report.extend(checks, None, ms);
    report
}

pub fn run_bergman(cfg: &bergman::BergmanConfig, seed: u64, opts: &RunOptions) -> RunReport {
    let cfg = bergman::BergmanConfig { seed, exec: opts.exec, ..cfg.clone() };
    let mut report = RunReport::new("bergman", seed, echo(&cfg));
    let ((checks, summary), ms) = timed(opts, || bergman::checks::run(&cfg));
    report.extend(checks, None, ms);
    report.summary = to_map(&summary);
    report
}

pub fn run_sharp_only(cfg: &sharp::SharpConfig, seed: u64, opts: &RunOptions) -> RunReport {
    let cfg = sharp::SharpConfig { seed, exec: opts.exec, ..cfg.clone() };
    let mut report = RunReport::new("sharp", seed, echo(&cfg));
    let ((checks, summary), ms) = timed(opts, || sharp::checks::run(&cfg));
    report.extend(checks, None, ms);
    report.summary = to_map(&summary);
    report
}

pub fn run_cmu(cfg: &sharp::CmuConfig, seed: u64, opts: &RunOptions) -> RunReport {
    let cfg = sharp::CmuConfig { exec: opts.exec, ..cfg.clone() };
    let mut report = RunReport::new("cmu", seed, echo(&cfg));
    let ((checks, summary), ms) = timed(opts, || sharp::run_cmu(&cfg));
    report.extend(checks, None, ms);
    report.summary = to_map(&summary);
    report
}

fn run_sharp(cfg: &SharpSuiteConfig, seed: u64, opts: &RunOptions) -> RunReport {
    let mut cfg = cfg.clone();
    cfg.sharp.seed = seed;
    let mut report = RunReport::new("sharp", seed, echo(&cfg));
    let s = run_sharp_only(&cfg.sharp, seed, opts);
    let c = run_cmu(&cfg.cmu, seed, opts);
    for r in s.records {
        report.push(r);
    }
    for mut r in c.records {
        r.name = format!("cmu: {}", r.name);
        report.push(r);
    }
    report.summary.insert("sharp".into(), Value::Object(s.summary));
    report.summary.insert("cmu".into(), Value::Object(c.summary));
    report
}

/// Runs one module's invariant suite, or all of them.
///
/// For a single suite the config is a flat object of that module's keys
/// plus `seed`. For `all` it is `{"seed": .., "<suite>": {..}, ..}`.
/// Unknown keys are rejected.
pub fn run_suite(name: &str, config: &Value, opts: &RunOptions) -> Result<RunReport, SuiteError> {
    if !SUITES.contains(&name) {
        return Err(SuiteError::Unknown(name.into()));
    }
    let (cfg_seed, rest) = take_seed(name, config)?;
    let seed = opts.seed.or(cfg_seed).unwrap_or(cone_rcb::rng::DEFAULT_SEED);
    match name {
        "jordan" => run_jordan(&parse(name, rest)?, seed, opts),
        "gamma" => Ok(run_gamma(&parse(name, rest)?, seed, opts)),
        "rcb" => Ok(run_rcb(&parse(name, rest)?, seed, opts)),
        "bergman" => Ok(run_bergman(&parse(name, rest)?, seed, opts)),
        "sharp" => Ok(run_sharp(&parse(name, rest)?, seed, opts)),
        _ => {
            let mut sections = match rest {
                Value::Object(m) => m,
                _ => unreachable!(),
            };
            if let Some(k) = sections.keys().find(|k| !SUITES[..5].contains(&k.as_str())) {
                return Err(SuiteError::Config { suite: "all".into(), msg: format!("unknown section `{k}`") });
            }
            let mut report = RunReport::new("all", seed, Value::Null);
            let mut echoes = Map::new();
            for suite in &SUITES[..5] {
                let section = sections.remove(*suite).unwrap_or_else(|| json!({}));
                if section.get("seed").is_some() {
                    return Err(SuiteError::Config { suite: (*suite).into(), msg: "seed is set once, at the top level".into() });
                }
                let sub = run_suite(suite, &section, &RunOptions { seed: Some(seed), ..*opts })?;
                echoes.insert((*suite).into(), sub.config);
                if !sub.summary.is_empty() {
                    report.summary.insert((*suite).into(), Value::Object(sub.summary));
                }
                for mut r in sub.records {
                    r.name = format!("{suite}: {}", r.name);
                    report.push(r);
                }
            }
            report.config = Value::Object(echoes);
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_and_bad_config() {
        let o = RunOptions::default();
        assert!(matches!(run_suite("nope", &json!({}), &o), Err(SuiteError::Unknown(_))));
        assert!(matches!(run_suite("gamma", &json!({"bogus": 1}), &o), Err(SuiteError::Config { .. })));
        assert!(matches!(run_suite("gamma", &json!([1]), &o), Err(SuiteError::Config { .. })));
        assert!(matches!(run_suite("all", &json!({"rcbb": {}}), &o), Err(SuiteError::Config { .. })));
        assert!(matches!(run_suite("jordan", &json!({"algebras": ["quat:3"]}), &o), Err(SuiteError::Config { .. })));
    }

    #[test]
    fn seed_precedence() {
        let r = run_suite("gamma", &json!({"seed": 11}), &RunOptions::default()).unwrap();
        assert_eq!(r.seed, 11);
        let r = run_suite("gamma", &json!({"seed": 11}), &RunOptions { seed: Some(3), ..Default::default() }).unwrap();
        assert_eq!(r.seed, 3);
        assert_eq!(run_suite("gamma", &Value::Null, &RunOptions::default()).unwrap().seed, 7);
    }
}
