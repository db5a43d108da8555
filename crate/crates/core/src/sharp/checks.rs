use super::circle::{pi_minus_samples, project, sampled_norm_sq, CircleFunction, GroupElement};
use super::intertwiner::{
    a_mu_eigenvalue, a_mu_matrix, c_mu, d_s, intertwining_residual, off_diagonal_leakage, AMuQuadrature, EigenPath,
};
use super::symbol::{
    cross_ratio, hs_norm_of_one, hs_norm_singular, op_from_symbol, sharp_integral_formula, sharp_product,
    symbol_from_kernel, FinitePartRule, KernelOperator, Symbol,
};
use super::circle::projective_action;
use super::xi::xi_invariance_check;
use crate::report::Check;
use crate::{rng, Error, Exec, Result};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C = Complex64;

/// Settings for the symbolic-calculus suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SharpConfig {
    pub mu: f64,
    /// working truncation N for translated symbols
    pub modes: usize,
    pub grid: usize,
    pub tol: f64,
    /// random (u, v) points for the two product formulas
    pub points: usize,
    /// random group elements for the covariance check
    pub trials: usize,
    pub band: f64,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for SharpConfig {
    fn default() -> Self {
        Self { mu: -0.5, modes: 16, grid: 256, tol: 1e-5, points: 20, trials: 10, band: 0.1, seed: rng::DEFAULT_SEED, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpSummary {
    pub mu: f64,
    pub formula_rel_error: f64,
    pub hs_worst_ratio: f64,
    pub covariance_residual: f64,
    pub associativity_residual: f64,
    pub excision_coverage: f64,
}

/// Symbol sizes of the random test symbols.
const ACTIVE: usize = 3;

fn group_draws(cfg: &SharpConfig) -> Vec<GroupElement> {
    let mut r = rng::stream(cfg.seed ^ 0x5A, 1);
    let mut out = vec![GroupElement::rotation(0.9), GroupElement::boost(0.3), GroupElement::shear(0.4)];
    while out.len() < cfg.trials.max(3) {
        out.push(GroupElement::random(0.3, &mut r));
    }
    out.truncate(cfg.trials.max(1));
    out
}

fn push(checks: &mut Vec<Check>, name: &str, tol: f64, r: Result<(f64, String)>) {
    checks.push(match r {
        Ok((v, d)) => {
            let c = Check::measured(name, v, tol);
            if d.is_empty() {
                c
            } else {
                c.with_detail(d)
            }
        }
        Err(e) => Check::errored(name, tol, e),
    });
}

pub fn run(cfg: &SharpConfig) -> (Vec<Check>, SharpSummary) {
    let mut checks = Vec::new();
    let mu = cfg.mu;
    let exec = cfg.exec;
    let mut summary = SharpSummary {
        mu,
        formula_rel_error: f64::NAN,
        hs_worst_ratio: f64::NAN,
        covariance_residual: f64::NAN,
        associativity_residual: f64::NAN,
        excision_coverage: f64::NAN,
    };
    let mut r = rng::stream(cfg.seed ^ 0x5A, 0);

    // unitarity of pi^- and pi^+ on the line Re mu = -1
    let phi = CircleFunction::random(6, &mut r);
    let gs: Vec<GroupElement> = (0..5).map(|_| GroupElement::random(0.8, &mut r)).collect();
    let unit = gs
        .iter()
        .flat_map(|g| [*g, g.theta()])
        .map(|g| (sampled_norm_sq(&pi_minus_samples(C::new(-1.0, 0.7), &g, &phi, 1024)) / phi.norm_sq() - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check::measured("pi(g) unitary on Re mu = -1", unit, 1e-8));
    let off = (sampled_norm_sq(&pi_minus_samples(C::new(mu, 0.0), &GroupElement::boost(0.7), &phi, 1024)) / phi.norm_sq() - 1.0).abs();
    checks.push(Check::boolean("pi(g) not unitary off the line", off > 1e-3).with_detail(format!("norm ratio deviation {off:.3e}")));

    // projection / group action sanity: pi^-(g) pi^-(h) = pi^-(gh)
    let comp: Result<f64> = (|| {
        let (g, h) = (gs[0], gs[1]);
        let m = C::new(-1.0, 0.7);
        let step = project(&pi_minus_samples(m, &h, &phi, 1024), 40)?.function;
        let lhs = pi_minus_samples(m, &g, &step, 1024);
        let rhs = pi_minus_samples(m, &g.mul(&h), &phi, 1024);
        Ok(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / rhs.iter().map(|c| c.norm()).fold(0.0, f64::max))
    })();
    push(&mut checks, "pi(g) pi(h) = pi(gh)", 1e-8, comp.map(|v| (v, String::new())));

    // cross-ratio invariance
    let cr = (0..50)
        .map(|_| {
            let g = GroupElement::random(1.0, &mut r);
            let th = g.theta();
            let [u, y, x, v]: [f64; 4] = std::array::from_fn(|_| r.random_range(0.0..PI));
            let a = cross_ratio(u, y, x, v);
            let b = cross_ratio(
                projective_action(&g, u).0,
                projective_action(&g, y).0,
                projective_action(&th, x).0,
                projective_action(&th, v).0,
            );
            (a - b).abs() / a.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    checks.push(Check::measured("cross-ratio invariance", cr, 1e-10));

    let symbols: Result<(Symbol, Symbol, Symbol)> = (|| {
        Ok((
            Symbol::random(mu, ACTIVE, ACTIVE, &mut r)?,
            Symbol::random(mu, ACTIVE, ACTIVE, &mut r)?,
            Symbol::random(mu, ACTIVE, ACTIVE, &mut r)?,
        ))
    })();
    let (f, g, h) = match symbols {
        Ok(s) => s,
        Err(e) => {
            checks.push(Check::errored("symbol construction", cfg.tol, e));
            return (checks, summary);
        }
    };

    // composition vs the real-space integral
    let formula: Result<(f64, String)> = (|| {
        let fg = sharp_product(&f, &g)?;
        let rule = FinitePartRule::new(mu, 8 * ACTIVE + 16, 48)?;
        let pts: Vec<(f64, f64)> = (0..cfg.points).map(|_| (r.random_range(0.0..PI), r.random_range(0.0..PI))).collect();
        let mut err = 0.0f64;
        let mut scale = 0.0f64;
        for (u, v) in pts {
            let a = fg.value(u, v);
            let b = sharp_integral_formula(&f, &g, u, v, &rule)?;
            err = err.max((a - b).norm());
            scale = scale.max(a.norm());
        }
        Ok((err / scale, format!("{} points, max |h| = {scale:.4e}", cfg.points)))
    })();
    if let Ok((v, _)) = &formula {
        summary.formula_rel_error = *v;
    }
    push(&mut checks, "product = cross-ratio integral", 1e-4, formula);

    // identity symbol
    let ident: Result<(f64, String)> = (|| {
        let one = Symbol::identity(mu, ACTIVE)?;
        let a = sharp_product(&f, &one)?;
        let b = sharp_product(&one, &f)?;
        let n = f.coeffs().norm();
        Ok(((a.coeffs() - f.coeffs()).norm().max((b.coeffs() - f.coeffs()).norm()) / n, String::new()))
    })();
    push(&mut checks, "f # 1 = 1 # f = f", 1e-12, ident);

    // HS submultiplicativity
    let hs: Result<(f64, String)> = (|| {
        let mut worst = 0.0f64;
        for _ in 0..cfg.trials.max(1) {
            let a = Symbol::random(mu, ACTIVE + 1, ACTIVE + 1, &mut r)?;
            let b = Symbol::random(mu, ACTIVE, ACTIVE + 1, &mut r)?;
            let ab = sharp_product(&a, &b)?;
            worst = worst.max(ab.hs_norm()? / (a.hs_norm()? * b.hs_norm()?));
        }
        Ok((worst, "max ||f#g|| / (||f|| ||g||)".into()))
    })();
    if let Ok((v, _)) = &hs {
        summary.hs_worst_ratio = *v;
    }
    push(&mut checks, "||f # g||_HS <= ||f||_HS ||g||_HS", 1.0, hs);

    // associativity
    let assoc: Result<(f64, String)> = (|| {
        let l = sharp_product(&sharp_product(&f, &g)?, &h)?;
        let rr = sharp_product(&f, &sharp_product(&g, &h)?)?;
        Ok(((l.coeffs() - rr.coeffs()).norm() / l.coeffs().norm(), String::new()))
    })();
    if let Ok((v, _)) = &assoc {
        summary.associativity_residual = *v;
    }
    push(&mut checks, "(f # g) # h = f # (g # h)", cfg.tol, assoc);

    // covariance
    let cov: Result<(f64, String)> = (|| {
        let fg = sharp_product(&f, &g)?;
        let xs = group_draws(cfg);
        let pts: Vec<(f64, f64)> = (0..cfg.points).map(|_| (r.random_range(0.0..PI), r.random_range(0.0..PI))).collect();
        let mut worst = 0.0f64;
        let mut alias = 0.0f64;
        for x in &xs {
            let (fx, a1) = f.translated(x, cfg.modes, cfg.grid, exec)?;
            let (gx, a2) = g.translated(x, cfg.modes, cfg.grid, exec)?;
            alias = alias.max(a1).max(a2);
            let hx = sharp_product(&fx, &gx)?;
            let (mut err, mut scale) = (0.0f64, 0.0f64);
            for &(u, v) in &pts {
                let want = fg.translated_kernel(x, u, v);
                err = err.max((hx.kernel(u, v) - want).norm());
                scale = scale.max(want.norm());
            }
            worst = worst.max(err / scale);
        }
        Ok((worst, format!("{} elements, N={}, grid={}, aliasing {alias:.1e}", xs.len(), cfg.modes, cfg.grid)))
    })();
    if let Ok((v, _)) = &cov {
        summary.covariance_residual = *v;
    }
    push(&mut checks, "L_x(f # g) = (L_x f) # (L_x g)", cfg.tol, cov);

    // kernel grid: modes round trip and symbol recovery off the band
    let grid = cfg.grid.max(2 * f.n() + 2);
    let rt: Result<(f64, String)> = (|| {
        let k = KernelOperator::from_modes(f.coeffs(), grid, exec);
        let (back, _) = k.to_modes(f.n())?;
        Ok(((back - f.coeffs()).norm() / f.coeffs().norm(), String::new()))
    })();
    push(&mut checks, "kernel grid <-> modes round trip", 1e-10, rt);
    let rec: Result<(f64, String)> = (|| {
        let k = op_from_symbol(|u, v| f.value(u, v), mu, grid, exec)?;
        let back = symbol_from_kernel(&k, mu, cfg.band)?;
        let mut worst = 0.0f64;
        for (i, row) in back.values.iter().enumerate() {
            for (j, val) in row.iter().enumerate() {
                if let Some(val) = val {
                    let want = f.value(KernelOperator::grid_point(grid, i), KernelOperator::dual_point(grid, j));
                    worst = worst.max((val - want).norm() / want.norm().max(1e-300));
                }
            }
        }
        summary.excision_coverage = back.coverage;
        Ok((worst, format!("band {} coverage {:.4}", cfg.band, back.coverage)))
    })();
    push(&mut checks, "symbol -> kernel -> symbol off the band", 1e-10, rec);

    // HS norm of the constant symbol, singular quadrature vs closed form
    let one_mu = if mu > -0.5 { mu } else { -0.25 };
    let hs1 = hs_norm_singular(|_, _| C::new(1.0, 0.0), one_mu, 8, 40)
        .map(|q| ((q / hs_norm_of_one(one_mu) - 1.0).abs(), format!("mu={one_mu} ||Op(1)||_HS={q:.12}")));
    push(&mut checks, "HS norm of f = 1", 1e-10, hs1);

    (checks, summary)
}

/// Settings for the intertwiner suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CmuConfig {
    pub mu: f64,
    pub nmax: usize,
    /// truncation for the intertwining residual
    pub modes: usize,
    pub tol: f64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for CmuConfig {
    fn default() -> Self {
        Self { mu: -1.5, nmax: 8, modes: 16, tol: 1e-6, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CmuSummary {
    pub mu: f64,
    pub c_mu: Option<C>,
    pub eigenvalues: Vec<C>,
    pub products: Vec<C>,
}

pub fn run_cmu(cfg: &CmuConfig) -> (Vec<Check>, CmuSummary) {
    let mut checks = Vec::new();
    let mu = C::new(cfg.mu, 0.0);
    let dual = -mu - 2.0;
    let mut summary = CmuSummary { mu: cfg.mu, c_mu: None, eigenvalues: Vec::new(), products: Vec::new() };

    let c = match c_mu(mu) {
        Ok(c) => c,
        Err(e) => {
            checks.push(Check::errored("c(mu)", cfg.tol, e));
            return (checks, summary);
        }
    };
    summary.c_mu = Some(c);
    checks.push(Check::boolean("c(mu) = c(-mu-2)", c_mu(dual).map(|d| d == c).unwrap_or(false)));

    let prods: Result<Vec<(C, C)>> = (0..=cfg.nmax as i64)
        .map(|n| {
            let l = a_mu_eigenvalue(n, mu)?;
            Ok((l, l * a_mu_eigenvalue(n, dual)?))
        })
        .collect();
    match prods {
        Ok(p) => {
            summary.eigenvalues = p.iter().map(|x| x.0).collect();
            summary.products = p.iter().map(|x| x.1).collect();
            let mean: C = summary.products.iter().sum::<C>() / summary.products.len() as f64;
            let var = summary.products.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / summary.products.len() as f64;
            checks.push(Check::measured("lambda_n(mu) lambda_n(-mu-2) independent of n (variance)", var / c.norm_sqr().max(1e-300), 1e-10));
            let err = summary.products.iter().map(|x| (x - c).norm()).fold(0.0, f64::max) / c.norm().max(1e-300);
            checks.push(Check::measured("lambda_n(mu) lambda_n(-mu-2) = c(mu)", err, cfg.tol));
            let par = (0..=cfg.nmax as i64)
                .map(|n| {
                    let (a, b) = (a_mu_eigenvalue(n, mu), a_mu_eigenvalue(-n, mu));
                    matches!((a, b), (Ok(a), Ok(b)) if a == b)
                })
                .all(|x| x);
            checks.push(Check::boolean("lambda_n = lambda_-n", par));
        }
        Err(e) => checks.push(Check::errored("lambda_n(mu) lambda_n(-mu-2) = c(mu)", cfg.tol, e)),
    }

    // quadrature against the closed form, whichever of mu and -mu-2 is below -1
    let q_mu = if cfg.mu < -1.0 { Some(cfg.mu) } else if dual.re < -1.0 { Some(dual.re) } else { None };
    if let Some(qm) = q_mu {
        let quad: Result<(f64, String)> = (|| {
            let q = AMuQuadrature::new(qm, 64)?;
            let mut worst = 0.0f64;
            for n in 0..=cfg.nmax.min(5) as i64 {
                let e = |t: f64| C::from_polar(1.0, 2.0 * n as f64 * t);
                let v = q.apply_at(e, 0.37) / e(0.37);
                let want = a_mu_eigenvalue(n, C::new(qm, 0.0))?;
                worst = worst.max((v - want).norm() / want.norm().max(1.0));
            }
            Ok((worst, format!("quadrature at mu={qm}")))
        })();
        push(&mut checks, "A_mu quadrature = closed-form eigenvalues", 1e-8, quad);
        let leak = a_mu_matrix(qm, 8, 256, cfg.exec).map(|m| (off_diagonal_leakage(&m), String::new()));
        push(&mut checks, "A_mu diagonal on K-types", 1e-8, leak);
    }

    let g = GroupElement::diag(2.0).expect("det 1");
    let ir = intertwining_residual(mu, &g, cfg.modes, EigenPath::ClosedForm, cfg.exec)
        .map(|v| (v, format!("g=diag(2,1/2) N={}", cfg.modes)));
    push(&mut checks, "A_mu pi(g) = pi'(g) A_mu", cfg.tol, ir);
    let rot = intertwining_residual(mu, &GroupElement::rotation(0.6), cfg.modes, EigenPath::ClosedForm, cfg.exec)
        .map(|v| (v, String::new()));
    push(&mut checks, "intertwining for rotations", 1e-10, rot);

    let ds = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&s| c_mu(C::new(-1.0, s)).map(|c| (c * d_s(s).norm_sqr() - 1.0).norm()))
        .try_fold(0.0f64, |acc, r| r.map(|v| acc.max(v)))
        .map(|v| (v, String::new()));
    push(&mut checks, "c(-1+is) |d(s)|^2 = 1", 1e-12, ds);

    let (xi_check, odd) = xi_checks();
    checks.push(xi_check);
    checks.push(odd);
    (checks, summary)
}

/// Invariance for even k <= 8 and five boosts; odd k must be rejected.
pub fn xi_checks() -> (Check, Check) {
    let pts = [C::new(0.0, 1.0), C::new(-0.7, 0.3), C::new(1.5, 2.0)];
    let boosts = [0.5, 2.0, 3.0, -1.5, 0.1];
    let mut cases = Vec::new();
    for k in (0..=8).step_by(2) {
        for &a in &boosts {
            for &z in &pts {
                cases.push((k, a, z));
            }
        }
    }
    let worst = cases.iter().try_fold(0.0f64, |acc, &(k, a, z)| xi_invariance_check(k, a, z).map(|v| acc.max(v)));
    let c = match worst {
        Ok(v) => Check::measured("xi_k invariant under diag(a, 1/a), even k <= 8", v, 1e-12),
        Err(e) => Check::errored("xi_k invariant under diag(a, 1/a), even k <= 8", 1e-12, e),
    };
    let odd = [1i64, 3, 5, 7].iter().all(|&k| matches!(xi_invariance_check(k, 2.0, C::new(0.0, 1.0)), Err(Error::OddWeight(_))));
    (c, Check::boolean("odd k rejected", odd))
}
