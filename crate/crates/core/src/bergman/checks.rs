use super::cone::{cone_norm, cone_norm_sq, laplace_transform, ConeFunction};
use super::tube::{cauchy_riemann_residual, tube_norm, tube_norm_sq, PowerProbe, ProbeProduct, QuadratureScheme, TubeFunction};
use crate::gamma::gamma;
use crate::jordan::Algebra;
use crate::report::Check;
use crate::special::{conv_constant, tube_transfer_factor, ConvVariant};
use crate::{rng, Error, Exec, Result};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C = Complex64;

#[derive(Debug, Clone, Serialize)]
pub struct IsometryReport {
    pub nu: f64,
    pub cone_norm_sq: f64,
    pub tube_norm_sq: f64,
    pub ratio: f64,
    pub expected: f64,
    pub rel_error: f64,
}

/// ||F||^2 / ||f||^2 against Gamma(nu - 1), both norms by quadrature.
pub fn isometry_check(f: &ConeFunction, nu: f64, scheme: &QuadratureScheme, exec: Exec) -> Result<IsometryReport> {
    let cone = cone_norm_sq(f, nu, exec)?;
    let probe = PowerProbe::transform_of(f)?;
    let tube = tube_norm_sq(&probe, nu, scheme, exec)?;
    let ratio = tube / cone;
    let expected = gamma(nu - 1.0);
    Ok(IsometryReport { nu, cone_norm_sq: cone, tube_norm_sq: tube, ratio, expected, rel_error: (ratio / expected - 1.0).abs() })
}

/// (nu - 1) / (4 pi), the rank-one kernel constant.
pub fn c_nu_expected(nu: f64) -> f64 {
    (nu - 1.0) / (4.0 * PI)
}

/// int int ((z - conj w)/2i)^{-nu} F(w) v^{nu-2} du dv, i.e. the reproducing
/// integral without the constant c_nu.
pub fn reproducing_integral(nu: f64, f: &dyn TubeFunction, z: C, scheme: &QuadratureScheme, exec: Exec) -> Result<C> {
    if !(nu > 2.0) {
        return Err(Error::Domain { name: "nu", value: nu, constraint: "nu > 2" });
    }
    if !(z.im > 0.0) {
        return Err(Error::OutsideTube);
    }
    let two_i = C::new(0.0, 2.0);
    let scale = f.scale().min(z.im);
    scheme.tube_integral(nu - 2.0, scale, z.re, exec, |w| {
        ((z - w.conj()) / two_i).powf(-nu) * f.eval(w) * w.im.powf(nu - 2.0)
    })
}

/// Least-squares c with c I_k = F_k(z_k) over the probes.
pub fn calibrate_c_nu(nu: f64, probes: &[(PowerProbe, C)], scheme: &QuadratureScheme, exec: Exec) -> Result<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (p, z) in probes {
        let i = reproducing_integral(nu, p, *z, scheme, exec)?;
        num += (i.conj() * p.eval(*z)).re;
        den += i.norm_sqr();
    }
    if den == 0.0 {
        return Err(Error::InvalidArgument("calibration needs a nonzero probe".into()));
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproducingReport {
    pub value: C,
    pub reproduced: C,
    /// |c I - F(z)| / |F(z)|
    pub residual: f64,
}

pub fn reproducing_check(
    nu: f64,
    f: &dyn TubeFunction,
    z: C,
    c_nu: f64,
    scheme: &QuadratureScheme,
    exec: Exec,
) -> Result<ReproducingReport> {
    let reproduced = reproducing_integral(nu, f, z, scheme, exec)? * c_nu;
    let value = f.eval(z);
    let residual = (reproduced - value).norm() / value.norm().max(f64::MIN_POSITIVE);
    Ok(ReproducingReport { value, reproduced, residual })
}

/// Reproducing residuals on `base` refined 0..=levels times, with the
/// observed order log2(r_l / r_{l+1}) between consecutive levels.
pub fn reproducing_refinement(
    nu: f64,
    f: &dyn TubeFunction,
    z: C,
    c_nu: f64,
    base: &QuadratureScheme,
    levels: u32,
    exec: Exec,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let res: Vec<f64> = (0..=levels)
        .map(|l| reproducing_check(nu, f, z, c_nu, &base.refined(l), exec).map(|r| r.residual))
        .collect::<Result<_>>()?;
    let orders = res.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok((res, orders))
}

/// Probe set for calibrating c_nu.
pub fn calibration_probes(nu: f64) -> Vec<(PowerProbe, C)> {
    let p = |c: f64, beta: f64, s: f64| PowerProbe { c: C::new(c, 0.0), beta, s };
    vec![
        (p(2f64.powf(nu + 1.0), 1.0, nu + 1.0), C::new(0.0, 1.0)),
        (p(1.0, 0.8, nu / 2.0 + 1.0), C::new(0.5, 1.5)),
        (p(1.0, 1.5, nu), C::new(-0.7, 0.6)),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantBound {
    pub variant: ConvVariant,
    pub constant: f64,
    pub bound: f64,
    /// left side / bound
    pub ratio: f64,
    pub holds: bool,
}

fn variant_bounds(lhs: f64, rhs_without_constant: f64, nu1: f64, nu2: f64, transfer: f64) -> Result<Vec<VariantBound>> {
    ConvVariant::ALL
        .iter()
        .map(|&variant| {
            let constant = transfer * conv_constant(nu1, nu2, Algebra::line(), variant)?;
            let bound = constant * rhs_without_constant;
            let ratio = if bound > 0.0 { lhs / bound } else if lhs == 0.0 { 0.0 } else { f64::INFINITY };
            Ok(VariantBound { variant, constant, bound, ratio, holds: lhs <= bound })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductReport {
    pub nu1: f64,
    pub nu2: f64,
    pub norm1: f64,
    pub norm2: f64,
    pub product_norm: f64,
    pub variants: Vec<VariantBound>,
    pub any_holds: bool,
}

/// ||F1 F2||_{nu1+nu2} against C ||F1||_{nu1} ||F2||_{nu2}, with C the cone
/// constant carried over to the tube by the transform isometry.
pub fn pointwise_product_check(
    f1: &PowerProbe,
    nu1: f64,
    f2: &PowerProbe,
    nu2: f64,
    scheme: &QuadratureScheme,
    exec: Exec,
) -> Result<ProductReport> {
    let norm1 = tube_norm(f1, nu1, scheme, exec)?;
    let norm2 = tube_norm(f2, nu2, scheme, exec)?;
    let prod = ProbeProduct(vec![*f1, *f2]);
    let product_norm = if norm1 == 0.0 || norm2 == 0.0 { 0.0 } else { tube_norm(&prod, nu1 + nu2, scheme, exec)? };
    if !product_norm.is_finite() {
        return Err(Error::Divergent("product norm".into()));
    }
    let transfer = tube_transfer_factor(nu1, nu2, Algebra::line())?;
    let variants = variant_bounds(product_norm, norm1 * norm2, nu1, nu2, transfer)?;
    let any_holds = variants.iter().any(|v| v.holds);
    Ok(ProductReport { nu1, nu2, norm1, norm2, product_norm, variants, any_holds })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvolutionReport {
    pub nu1: f64,
    pub nu2: f64,
    pub norm_u: f64,
    pub norm_v: f64,
    pub conv_norm: f64,
    pub variants: Vec<VariantBound>,
    pub any_holds: bool,
}

/// ||u * v||_{nu1+nu2} against C ||u||_{nu1} ||v||_{nu2} on the cone.
pub fn convolution_inequality_check(u: &ConeFunction, nu1: f64, v: &ConeFunction, nu2: f64, exec: Exec) -> Result<ConvolutionReport> {
    let norm_u = cone_norm(u, nu1, exec)?;
    let norm_v = cone_norm(v, nu2, exec)?;
    let conv = ConeFunction::convolution(u, v)?;
    let conv_norm = cone_norm(&conv, nu1 + nu2, exec)?;
    let variants = variant_bounds(conv_norm, norm_u * norm_v, nu1, nu2, 1.0)?;
    let any_holds = variants.iter().any(|v| v.holds);
    Ok(ConvolutionReport { nu1, nu2, norm_u, norm_v, conv_norm, variants, any_holds })
}

/// max_z |L(u*v)(z) - sqrt(2 pi) L(u)(z) L(v)(z)| / |sqrt(2 pi) L(u) L(v)|,
/// every transform by quadrature.
pub fn homomorphism_residual(u: &ConeFunction, v: &ConeFunction, points: &[C], exec: Exec) -> Result<f64> {
    let conv = ConeFunction::convolution(u, v)?;
    let mut worst: f64 = 0.0;
    for &z in points {
        let lhs = laplace_transform(&conv, z, exec)?;
        let rhs = laplace_transform(u, z, exec)? * laplace_transform(v, z, exec)? * (2.0 * PI).sqrt();
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct KhsReport {
    pub partial: C,
    pub exact: C,
    pub residual: f64,
    /// |t_{M+1}| / (1 - rho) with rho bounding every later term ratio
    pub tail_bound: f64,
    /// floating-point allowance for summing the first M + 1 terms
    pub rounding: f64,
    pub within: bool,
}

/// Partial sum of sum_m (nu)_m x^m / m! with x = z conj(w) against (1 - x)^{-nu}.
pub fn khs_expansion_check(nu: f64, z: C, w: C, m: u32) -> Result<KhsReport> {
    if !(nu > 0.0) {
        return Err(Error::Domain { name: "nu", value: nu, constraint: "nu > 0" });
    }
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(Error::InvalidArgument("z and w must lie in the unit disc".into()));
    }
    let x = z * w.conj();
    let ax = x.norm();
    if ax >= 1.0 {
        return Err(Error::Divergent(format!("|z conj(w)| = {ax} >= 1")));
    }
    let mut t = C::new(1.0, 0.0);
    let mut partial = t;
    let mut abs_sum = 1.0;
    for k in 0..m {
        t = t * x * ((nu + k as f64) / (k + 1) as f64);
        partial += t;
        abs_sum += t.norm();
    }
    let next = t.norm() * ax * (nu + m as f64) / (m + 1) as f64;
    // term ratios |x| (nu + k)/(k + 1) decrease to |x| when nu >= 1 and increase to it otherwise
    let rho = ax * ((nu + m as f64 + 1.0) / (m as f64 + 2.0)).max(1.0);
    if rho >= 1.0 {
        return Err(Error::NoConvergence(format!("terms past M = {m} are not yet decreasing")));
    }
    let tail_bound = next / (1.0 - rho);
    let exact = (C::new(1.0, 0.0) - x).powf(-nu);
    let residual = (exact - partial).norm();
    let rounding = 4.0 * (m as f64 + 1.0) * f64::EPSILON * (abs_sum + exact.norm());
    Ok(KhsReport { partial, exact, residual, tail_bound, rounding, within: residual <= tail_bound + rounding })
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftReport {
    pub nu: f64,
    pub norm: f64,
    pub derivative_norm: f64,
    pub norm_closed: f64,
    pub derivative_norm_closed: f64,
    pub finite: bool,
}

/// ||F||_nu and ||F'||_{nu+2}, by quadrature and in closed form.
pub fn derivative_shift_check(f: &PowerProbe, nu: f64, scheme: &QuadratureScheme, exec: Exec) -> Result<ShiftReport> {
    let d = f.derivative();
    let norm = tube_norm(f, nu, scheme, exec)?;
    let derivative_norm = tube_norm(&d, nu + 2.0, scheme, exec)?;
    Ok(ShiftReport {
        nu,
        norm,
        derivative_norm,
        norm_closed: f.norm_sq_closed(nu)?.sqrt(),
        derivative_norm_closed: d.norm_sq_closed(nu + 2.0)?.sqrt(),
        finite: norm.is_finite() && derivative_norm.is_finite(),
    })
}

/// Random admissible pair (u^a e^{-bu}, nu): nu in (1.2, 4), 2a + 2 - nu >= 0.4.
pub fn random_probe(rng: &mut impl Rng) -> (ConeFunction, f64) {
    let nu: f64 = rng.random_range(1.2..4.0);
    let a_min = (nu / 2.0 - 1.0).max(0.0) + 0.2;
    let a = rng.random_range(a_min..3.0);
    let b = rng.random_range(0.5..2.0);
    (ConeFunction::PowerExp { c: 1.0, a, b }, nu)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BergmanConfig {
    pub nu: f64,
    pub tol: f64,
    /// extra isometry runs on 2^1 .. 2^refine times finer panels
    pub refine: u32,
    pub draws: usize,
    pub seed: u64,
    pub scheme: QuadratureScheme,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for BergmanConfig {
    fn default() -> Self {
        Self { nu: 4.0, tol: 1e-4, refine: 0, draws: 10, seed: rng::DEFAULT_SEED, scheme: QuadratureScheme::default(), exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BergmanSummary {
    pub isometry_ratio: f64,
    pub expected: f64,
    pub refinement_errors: Vec<f64>,
    pub c_nu: Option<f64>,
    pub c_nu_expected: f64,
    pub product_inequality: crate::report::Status,
    /// constant variants that held on every draw
    pub variants_held: Vec<ConvVariant>,
    pub worst_ratio: Vec<(ConvVariant, f64)>,
}

fn isometry_probes(nu: f64) -> Vec<ConeFunction> {
    [(2.0, 1.0), (1.5, 0.7), (3.0, 2.0), (0.5, 1.3)]
        .into_iter()
        .filter(|(a, _)| 2.0 * a + 2.0 - nu > 0.0)
        .map(|(a, b)| ConeFunction::PowerExp { c: 1.0, a, b })
        .collect()
}

fn product_draws(cfg: &BergmanConfig) -> Result<Vec<(ProductReport, ConvolutionReport)>> {
    (0..cfg.draws)
        .map(|k| {
            let mut r = rng::stream(cfg.seed ^ 0xB3, k as u64);
            let (u, nu1) = random_probe(&mut r);
            let (v, nu2) = random_probe(&mut r);
            let p = pointwise_product_check(
                &PowerProbe::transform_of(&u)?,
                nu1,
                &PowerProbe::transform_of(&v)?,
                nu2,
                &cfg.scheme,
                cfg.exec,
            )?;
            let c = convolution_inequality_check(&u, nu1, &v, nu2, cfg.exec)?;
            Ok((p, c))
        })
        .collect()
}

/// The rank-one Bergman suite.
pub fn run(cfg: &BergmanConfig) -> (Vec<Check>, BergmanSummary) {
    let mut checks = Vec::new();
    let exec = cfg.exec;
    let nu = cfg.nu;
    let expected = gamma(nu - 1.0);
    let mut summary = BergmanSummary {
        isometry_ratio: f64::NAN,
        expected,
        refinement_errors: Vec::new(),
        c_nu: None,
        c_nu_expected: c_nu_expected(nu),
        product_inequality: crate::report::Status::Fail,
        variants_held: Vec::new(),
        worst_ratio: Vec::new(),
    };

    // Laplace isometry
    let probes = isometry_probes(nu);
    let iso: Result<Vec<IsometryReport>> = probes.iter().map(|f| isometry_check(f, nu, &cfg.scheme, exec)).collect();
    match iso {
        Ok(reps) if !reps.is_empty() => {
            summary.isometry_ratio = reps[0].ratio;
            let worst = reps.iter().map(|r| r.rel_error).fold(0.0, f64::max);
            checks.push(
                Check::measured("laplace isometry ratio = Gamma(nu-1)", worst, cfg.tol)
                    .with_detail(format!("nu={nu} ratio={:.12} expected={expected:.12} probes={}", reps[0].ratio, reps.len())),
            );
        }
        Ok(_) => checks.push(Check::errored("laplace isometry ratio = Gamma(nu-1)", cfg.tol, "no admissible probe")),
        Err(e) => checks.push(Check::errored("laplace isometry ratio = Gamma(nu-1)", cfg.tol, e)),
    }
    if cfg.refine > 0 {
        if let Some(f) = probes.first() {
            let errs: Result<Vec<f64>> = (0..=cfg.refine)
                .map(|l| isometry_check(f, nu, &cfg.scheme.refined(l), exec).map(|r| r.rel_error))
                .collect();
            match errs {
                Ok(e) => {
                    let worst = e.iter().cloned().fold(0.0, f64::max);
                    checks.push(
                        Check::measured("isometry under refinement", worst, cfg.tol)
                            .with_detail(format!("errors {:?}", e.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>())),
                    );
                    summary.refinement_errors = e;
                }
                Err(e) => checks.push(Check::errored("isometry under refinement", cfg.tol, e)),
            }
        }
    }

    // transform: quadrature against closed form
    let f = ConeFunction::PowerExp { c: 1.0, a: 2.0, b: 1.0 };
    let pts = [C::new(0.0, 1.0), C::new(0.8, 0.3), C::new(-1.5, 2.0)];
    let lt: Result<f64> = pts.iter().try_fold(0.0f64, |acc, &z| {
        let q = laplace_transform(&f, z, exec)?;
        let c = f.laplace_closed(z).expect("closed form");
        Ok(acc.max((q - c).norm() / c.norm()))
    });
    checks.push(match lt {
        Ok(r) => Check::measured("laplace transform quadrature", r, 1e-10),
        Err(e) => Check::errored("laplace transform quadrature", 1e-10, e),
    });

    // reproducing kernel
    if nu > 2.0 {
        let probes = calibration_probes(nu);
        match calibrate_c_nu(nu, &probes, &cfg.scheme, exec) {
            Ok(c) => {
                summary.c_nu = Some(c);
                let rel = (c / c_nu_expected(nu) - 1.0).abs();
                checks.push(
                    Check::measured("c_nu calibration = (nu-1)/4pi", rel, 1e-6).with_detail(format!("c_nu={c:.12}")),
                );
                let worst = probes.iter().try_fold(0.0f64, |acc, (p, z)| {
                    reproducing_check(nu, p, *z, c_nu_expected(nu), &cfg.scheme, exec).map(|r| acc.max(r.residual))
                });
                checks.push(match worst {
                    Ok(r) => Check::measured("reproducing kernel residual", r, 1e-5),
                    Err(e) => Check::errored("reproducing kernel residual", 1e-5, e),
                });
            }
            Err(e) => checks.push(Check::errored("c_nu calibration = (nu-1)/4pi", 1e-6, e)),
        }
    }

    // product theorem, tube and cone side
    match product_draws(cfg) {
        Ok(draws) => {
            let worst_of = |v: ConvVariant, tube: bool| {
                draws
                    .iter()
                    .map(|(p, c)| {
                        let list = if tube { &p.variants } else { &c.variants };
                        list.iter().find(|b| b.variant == v).map_or(f64::INFINITY, |b| b.ratio)
                    })
                    .fold(0.0, f64::max)
            };
            let tube_worst: Vec<(ConvVariant, f64)> = ConvVariant::ALL.iter().map(|&v| (v, worst_of(v, true))).collect();
            let cone_worst: Vec<(ConvVariant, f64)> = ConvVariant::ALL.iter().map(|&v| (v, worst_of(v, false))).collect();
            summary.variants_held = tube_worst.iter().filter(|(_, r)| *r <= 1.0).map(|(v, _)| *v).collect();
            let best = tube_worst.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
            let fmt = |w: &[(ConvVariant, f64)]| {
                w.iter().map(|(v, r)| format!("{}={r:.3}", v.name())).collect::<Vec<_>>().join(" ")
            };
            let c = Check::measured("pointwise product <= C ||F1|| ||F2||", best, 1.0)
                .with_detail(format!("worst lhs/bound over {} draws: {}", draws.len(), fmt(&tube_worst)));
            summary.product_inequality = c.status;
            checks.push(c);
            let cbest = cone_worst.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min);
            checks.push(
                Check::measured("cone convolution <= C ||u|| ||v||", cbest, 1.0)
                    .with_detail(format!("worst lhs/bound: {}", fmt(&cone_worst))),
            );
            summary.worst_ratio = tube_worst;
        }
        Err(e) => checks.push(Check::errored("pointwise product <= C ||F1|| ||F2||", 1.0, e)),
    }

    let u = ConeFunction::PowerExp { c: 1.0, a: 1.0, b: 1.0 };
    let v = ConeFunction::PowerExp { c: 1.0, a: 0.5, b: 1.7 };
    let grid: Vec<C> = (0..6).map(|k| C::new(-1.5 + 0.6 * k as f64, 0.2 + 0.3 * k as f64)).collect();
    checks.push(match homomorphism_residual(&u, &v, &grid, exec) {
        Ok(r) => Check::measured("transform of convolution = product of transforms", r, 1e-6),
        Err(e) => Check::errored("transform of convolution = product of transforms", 1e-6, e),
    });

    // KHS expansion
    let cases = [
        (2.0, C::new(0.5f64.sqrt(), 0.0), C::new(0.5f64.sqrt(), 0.0)),
        (3.5, C::new(0.0, 0.6), C::new(0.5, 0.0)),
        (nu, C::new(0.4, 0.3), C::new(-0.6, 0.5)),
        (0.5, C::new(0.7, 0.0), C::new(0.0, -0.7)),
        (nu, C::new(0.0, 0.0), C::new(0.0, 0.0)),
    ];
    let khs: Result<f64> = cases.iter().try_fold(0.0f64, |acc, (n, z, w)| {
        let r = khs_expansion_check(*n, *z, *w, 40)?;
        Ok(acc.max(if r.residual == 0.0 { 0.0 } else { r.residual / (r.tail_bound + r.rounding) }))
    });
    checks.push(match khs {
        Ok(r) => Check::measured("KHS partial sums within tail bound (M=40)", r, 1.0),
        Err(e) => Check::errored("KHS partial sums within tail bound (M=40)", 1.0, e),
    });

    // d/dz raises the weight by 2
    let probe = PowerProbe { c: C::new(0.0, 1.0), beta: 1.0, s: 3.0 };
    let shift_nu = if 2.0 * probe.s > nu && nu > 1.0 { nu } else { 4.0 };
    checks.push(match derivative_shift_check(&probe, shift_nu, &cfg.scheme, exec) {
        Ok(r) => {
            let rel = (r.derivative_norm / r.derivative_norm_closed - 1.0).abs().max((r.norm / r.norm_closed - 1.0).abs());
            Check::measured("d/dz maps weight nu into nu+2", if r.finite { rel } else { f64::INFINITY }, 1e-8)
                .with_detail(format!("||F||={:.10} ||F'||={:.10}", r.norm, r.derivative_norm))
        }
        Err(e) => Check::errored("d/dz maps weight nu into nu+2", 1e-8, e),
    });

    let pts: Vec<C> = (0..20).map(|k| C::new(-2.0 + 0.2 * k as f64, 0.1 + 0.15 * (k % 5) as f64)).collect();
    let cr = cauchy_riemann_residual(&PowerProbe::transform_of(&f).expect("closed form"), &pts, 1e-5);
    checks.push(Check::measured("probe holomorphy (Cauchy-Riemann)", cr, 1e-8));

    (checks, summary)
}
