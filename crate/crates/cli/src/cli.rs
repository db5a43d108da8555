//! Argument definitions and command dispatch.

use crate::report::{Format, Record, RunReport};
use crate::suite::{self, RunOptions, SuiteError};
use clap::{Args, Parser, Subcommand};
use cone_rcb::jordan::Algebra;
use cone_rcb::rcb::{self, express_in_modular_basis, named_form, rational_string, rcb_coeffs, rcb_qseries, Family};
use cone_rcb::report::Check;
use cone_rcb::special::{gindikin_gamma_real, gindikin_poles, pochhammer_general, wallach_contains, Weight};
use cone_rcb::Exec;
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "cone-rcb", version, about = "Symmetric cones, Rankin-Cohen brackets and covariant symbol calculus")]
pub struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Seed for every random draw.
    #[arg(long, env = "CONE_RCB_SEED", global = true)]
    pub seed: Option<u64>,
    /// Run loops on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Add runtime_ms to report records (output is then not reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euclidean Jordan algebra checks.
    Jordan {
        #[command(subcommand)]
        cmd: JordanCmd,
    },
    /// Gindikin Gamma_Omega(nu).
    Gamma(AlgNu),
    /// Generalized Pochhammer symbol (nu)_m.
    Pochhammer {
        #[command(flatten)]
        base: AlgNu,
        /// Partition m1 >= m2 >= ... >= mr >= 0, comma separated.
        #[arg(long)]
        weight: Weight,
    },
    /// Wallach set membership.
    Wallach(AlgNu),
    /// Rankin-Cohen brackets.
    Rcb {
        #[command(subcommand)]
        cmd: RcbCmd,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Debug, Args)]
pub struct AlgNu {
    /// Descriptor kind:n, kind one of sym, herm, spin.
    #[arg(long)]
    pub algebra: Algebra,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: f64,
}

#[derive(Debug, Subcommand)]
pub enum JordanCmd {
    /// Invariant suite for one algebra (all registered algebras if omitted).
    Check {
        #[arg(long)]
        algebra: Option<Algebra>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RcbCmd {
    /// Exact coefficients of F_j for weights k1, k2.
    Coeffs {
        #[arg(long, allow_hyphen_values = true)]
        k1: i64,
        #[arg(long, allow_hyphen_values = true)]
        k2: i64,
        #[arg(long)]
        j: i64,
    },
    /// q-expansion of F_j(f, g) and its coordinates in the E4/E6 basis.
    Modular {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = 50)]
        order: usize,
        /// Also solve for the E4^a E6^b coordinates.
        #[arg(long)]
        basis: bool,
    },
    /// Randomized covariance check under the slash action, bracket orders 0..=j.
    Covariance {
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_parser = parse_family, default_value = "exp")]
        family: Family,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    serde_json::from_value(json!(s)).map_err(|_| format!("unknown family `{s}` (exp, pole, mixed)"))
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// JSON config file; explicit flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Rank-one weighted Bergman space suite.
    Bergman {
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        refine: Option<u32>,
        #[arg(long)]
        draws: Option<usize>,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Covariant symbol calculus in the convergent window.
    Sharp {
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        band: Option<f64>,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Intertwiner eigenvalues and c(mu).
    Cmu {
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Jordan, gamma, rcb, bergman and sharp suites together.
    All(ConfigArg),
    /// Any single suite by name, configured from a file.
    Suite {
        name: String,
        #[command(flatten)]
        config: ConfigArg,
    },
}

/// What a command prints and its exit status.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn json(v: Value, code: i32) -> Self {
        let mut output = serde_json::to_string_pretty(&v).expect("json");
        output.push('\n');
        Self { output, code }
    }

    fn report(r: &RunReport, format: Format, color: bool) -> Self {
        Self { output: r.emit(format, color), code: r.exit_code() }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error(transparent)]
    Core(#[from] cone_rcb::Error),
    #[error("{0}")]
    Io(String),
}

fn load_config(arg: &ConfigArg) -> Result<Value, CliError> {
    match &arg.config {
        None => Ok(json!({})),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
    }
}

/// Overlays flag values onto a config object.
fn overlay(mut base: Value, flags: &[(&str, Option<Value>)]) -> Value {
    if let Value::Object(m) = &mut base {
        for (k, v) in flags {
            if let Some(v) = v {
                m.insert((*k).into(), v.clone());
            }
        }
    }
    base
}

fn opt<T: Into<Value> + Copy>(x: Option<T>) -> Option<Value> {
    x.map(Into::into)
}

fn float_list(xs: Vec<Complex64>) -> Value {
    Value::Array(xs.into_iter().map(|z| json!(z.re)).collect())
}

pub fn execute(cli: &Cli, color: bool) -> Result<Outcome, CliError> {
    let opts = RunOptions {
        seed: cli.seed,
        exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel },
        timings: cli.timings,
    };
    let fmt = cli.format;
    let seed = cli.seed.unwrap_or(cone_rcb::rng::DEFAULT_SEED);
    match &cli.command {
        Command::Jordan { cmd: JordanCmd::Check { algebra, trials, tol } } => {
            let cfg = overlay(
                json!({}),
                &[("algebras", algebra.map(|a| json!([a.to_string()]))), ("trials", opt(*trials)), ("tol", opt(*tol))],
            );
            Ok(Outcome::report(&suite::run_suite("jordan", &cfg, &opts)?, fmt, color))
        }
        Command::Gamma(AlgNu { algebra, nu }) => {
            let poles = gindikin_poles(Complex64::new(*nu, 0.0), *algebra);
            match gindikin_gamma_real(*nu, *algebra) {
                Ok(v) => Ok(Outcome::json(json!({"algebra": algebra.to_string(), "nu": nu, "value": v, "poles": float_list(poles)}), 0)),
                Err(e) => Ok(Outcome::json(
                    json!({"algebra": algebra.to_string(), "nu": nu, "value": null, "poles": float_list(poles), "error": e.to_string()}),
                    1,
                )),
            }
        }
        Command::Pochhammer { base: AlgNu { algebra, nu }, weight } => {
            let v = pochhammer_general(*nu, weight, *algebra)?;
            Ok(Outcome::json(json!({"algebra": algebra.to_string(), "nu": nu, "weight": weight.parts(), "value": v, "poles": []}), 0))
        }
        Command::Wallach(AlgNu { algebra, nu }) => {
            let inside = wallach_contains(*nu, *algebra);
            let half_d = algebra.d() / 2.0;
            let r = algebra.rank();
            let discrete: Vec<f64> = (0..r).map(|j| j as f64 * half_d).collect();
            Ok(Outcome::json(
                json!({
                    "algebra": algebra.to_string(),
                    "nu": nu,
                    "value": if inside { 1.0 } else { 0.0 },
                    "contains": inside,
                    "discrete": discrete,
                    "continuous_above": (r - 1) as f64 * half_d,
                    "poles": [],
                }),
                0,
            ))
        }
        Command::Rcb { cmd } => rcb_command(cmd, seed, &opts, fmt, color),
        Command::Verify { cmd } => verify_command(cmd, &opts, fmt, color),
    }
}

fn rcb_command(cmd: &RcbCmd, seed: u64, opts: &RunOptions, fmt: Format, color: bool) -> Result<Outcome, CliError> {
    match cmd {
        RcbCmd::Coeffs { k1, k2, j } => {
            let c = rcb_coeffs(*k1, *k2, *j)?;
            let coeffs: Vec<String> = c.iter().map(rational_string).collect();
            Ok(Outcome::json(json!({"k1": k1, "k2": k2, "j": j, "weight": k1 + k2 + 2 * j, "coeffs": coeffs}), 0))
        }
        RcbCmd::Modular { f, g, j, order, basis } => {
            let b = rcb_qseries(&named_form(f, *order)?, &named_form(g, *order)?, *j)?;
            let coeffs: Vec<String> = b.coeffs().iter().map(rational_string).collect();
            let mut out = json!({"weight": b.weight(), "coeffs": coeffs});
            if *basis {
                let e = express_in_modular_basis(&b)?;
                let m: Map<String, Value> =
                    e.coords.iter().filter(|(_, c)| !num_traits::Zero::is_zero(c)).map(|(m, c)| (m.name(), json!(rational_string(c)))).collect();
                out["basis"] = Value::Object(m);
                out["checked_through"] = json!(e.checked_through);
            }
            Ok(Outcome::json(out, 0))
        }
        RcbCmd::Covariance { j, trials, tol, family } => {
            let cfg = json!({"j": j, "trials": trials, "tol": tol, "family": family});
            let mut report = RunReport::new("rcb covariance", seed, cfg);
            let t = rcb::covariance::covariance_trials(*j, *trials, *family, seed, opts.exec)?;
            for jj in 0..=*j {
                let worst = t.iter().filter(|x| x.j == jj).map(|x| x.residual).fold(0.0, f64::max);
                let check = Check::measured(format!("F_{jj} covariance"), worst, *tol).with_detail(format!("{trials} draws"));
                report.push(Record::from_check(check, None));
            }
            Ok(Outcome::report(&report, fmt, color))
        }
    }
}

fn verify_command(cmd: &VerifyCmd, opts: &RunOptions, fmt: Format, color: bool) -> Result<Outcome, CliError> {
    let report = match cmd {
        VerifyCmd::Bergman { nu, tol, refine, draws, config } => {
            let cfg = overlay(
                load_config(config)?,
                &[("nu", opt(*nu)), ("tol", opt(*tol)), ("refine", opt(*refine)), ("draws", opt(*draws))],
            );
            suite::run_suite("bergman", &cfg, opts)?
        }
        VerifyCmd::Sharp { mu, modes, grid, tol, points, trials, band, config } => {
            let cfg = overlay(
                load_config(config)?,
                &[
                    ("mu", opt(*mu)),
                    ("modes", opt(*modes)),
                    ("grid", opt(*grid)),
                    ("tol", opt(*tol)),
                    ("points", opt(*points)),
                    ("trials", opt(*trials)),
                    ("band", opt(*band)),
                ],
            );
            let (seed, cfg) = split_seed("sharp", cfg, opts)?;
            suite::run_sharp_only(&parse_cfg("sharp", cfg)?, seed, opts)
        }
        VerifyCmd::Cmu { mu, nmax, modes, tol, config } => {
            let cfg = overlay(load_config(config)?, &[("mu", opt(*mu)), ("nmax", opt(*nmax)), ("modes", opt(*modes)), ("tol", opt(*tol))]);
            let (seed, cfg) = split_seed("cmu", cfg, opts)?;
            suite::run_cmu(&parse_cfg("cmu", cfg)?, seed, opts)
        }
        VerifyCmd::All(config) => suite::run_suite("all", &load_config(config)?, opts)?,
        VerifyCmd::Suite { name, config } => suite::run_suite(name, &load_config(config)?, opts)?,
    };
    Ok(Outcome::report(&report, fmt, color))
}

fn split_seed(name: &str, mut cfg: Value, opts: &RunOptions) -> Result<(u64, Value), CliError> {
    let from_cfg = match cfg.as_object_mut().and_then(|m| m.remove("seed")) {
        None => None,
        Some(s) => Some(s.as_u64().ok_or_else(|| SuiteError::Config { suite: name.into(), msg: "seed must be a non-negative integer".into() })?),
    };
    Ok((opts.seed.or(from_cfg).unwrap_or(cone_rcb::rng::DEFAULT_SEED), cfg))
}

fn parse_cfg<T: serde::de::DeserializeOwned>(name: &str, v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Suite(SuiteError::Config { suite: name.into(), msg: e.to_string() }))
}
