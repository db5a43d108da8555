//! The execution policy must not change any reported number.

use cone_rcb::bergman::{tube_norm_sq, BergmanConfig, PowerProbe, QuadratureScheme};
use cone_rcb::jordan::{checks as jc, Algebra};
use cone_rcb::rcb::{self, Family};
use cone_rcb::report::Check;
use cone_rcb::sharp::{self, CmuConfig, SharpConfig};
use cone_rcb::Exec;
use num_complex::Complex64 as C;

fn residuals(c: &[Check]) -> Vec<(String, u64)> {
    c.iter().map(|c| (c.name.clone(), c.residual.to_bits())).collect()
}

#[test]
fn jordan_suite_is_policy_independent() {
    let alg = Algebra::herm(3).unwrap();
    let a = jc::run(alg, &jc::JordanCheckConfig { trials: 40, exec: Exec::Sequential, ..Default::default() });
    let b = jc::run(alg, &jc::JordanCheckConfig { trials: 40, exec: Exec::Parallel, ..Default::default() });
    assert_eq!(residuals(&a), residuals(&b));
}

#[test]
fn tube_quadrature_is_policy_independent() {
    let p = PowerProbe::new(C::new(1.0, 0.5), 0.8, 2.7).unwrap();
    let s = QuadratureScheme::default();
    let a = tube_norm_sq(&p, 3.5, &s, Exec::Sequential).unwrap();
    let b = tube_norm_sq(&p, 3.5, &s, Exec::Parallel).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn rcb_covariance_is_policy_independent() {
    let a = rcb::covariance::covariance_trials(3, 10, Family::Mixed, 5, Exec::Sequential).unwrap();
    let b = rcb::covariance::covariance_trials(3, 10, Family::Mixed, 5, Exec::Parallel).unwrap();
    let bits = |v: &[rcb::covariance::CovarianceTrial]| v.iter().map(|t| t.residual.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn sharp_suites_are_reproducible() {
    let cfg = |exec| SharpConfig { modes: 12, grid: 128, trials: 4, exec, ..Default::default() };
    let (a, _) = sharp::checks::run(&cfg(Exec::Sequential));
    let (b, _) = sharp::checks::run(&cfg(Exec::Parallel));
    assert_eq!(residuals(&a), residuals(&b));
    let (a, _) = sharp::run_cmu(&CmuConfig { exec: Exec::Sequential, modes: 8, ..Default::default() });
    let (b, _) = sharp::run_cmu(&CmuConfig { exec: Exec::Parallel, modes: 8, ..Default::default() });
    assert_eq!(residuals(&a), residuals(&b));
}

#[test]
fn seed_changes_random_draws_only() {
    let base = BergmanConfig::default();
    assert_eq!(base.seed, cone_rcb::rng::DEFAULT_SEED);
    let a = rcb::covariance::covariance_trials(1, 3, Family::Exp, 1, Exec::Sequential).unwrap();
    let b = rcb::covariance::covariance_trials(1, 3, Family::Exp, 2, Exec::Sequential).unwrap();
    assert_ne!(a[0].z, b[0].z);
}
