//! Randomized invariant suite for a single algebra.

use super::{det_b_residual, Algebra, ComplexElement, Element};
use crate::exec::Exec;
use crate::report::Check;
use crate::rng;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JordanCheckConfig {
    pub trials: usize,
    /// Tolerance for the algebraic identities (relative).
    pub tol: f64,
    /// Tolerance for det B = h^{2n/r} (relative).
    pub det_b_tol: f64,
    /// Number of ball points for det B.
    pub det_b_points: usize,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for JordanCheckConfig {
    fn default() -> Self {
        Self { trials: 200, tol: 1e-10, det_b_tol: 1e-8, det_b_points: 50, seed: rng::DEFAULT_SEED, exec: Exec::default() }
    }
}

fn diff_norm(a: &Element, b: &Element) -> f64 {
    a.sub(b).map(|d| d.norm()).unwrap_or(f64::INFINITY)
}

fn max(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m: f64, x| if x.is_nan() { f64::INFINITY } else { m.max(x) })
}

/// Jordan identity x o (x^2 o y) = x^2 o (x o y), relative to 1 + |x|^3 |y|.
pub fn jordan_axiom_residual(alg: Algebra, trials: usize, seed: u64, exec: Exec) -> f64 {
    max(exec.map_range(0..trials, |t| {
        let mut r = rng::stream(seed, t as u64);
        let x = alg.random_element(&mut r);
        let y = alg.random_element(&mut r);
        let x2 = x.square();
        let lhs = x.product(&x2.product(&y).unwrap()).unwrap();
        let rhs = x2.product(&x.product(&y).unwrap()).unwrap();
        diff_norm(&lhs, &rhs) / (1.0 + x.norm().powi(3) * y.norm())
    }))
}

/// Commutativity |x o y - y o x| relative to 1 + |x||y|.
pub fn commutativity_residual(alg: Algebra, trials: usize, seed: u64, exec: Exec) -> f64 {
    max(exec.map_range(0..trials, |t| {
        let mut r = rng::stream(seed ^ 0x11, t as u64);
        let x = alg.random_element(&mut r);
        let y = alg.random_element(&mut r);
        diff_norm(&x.product(&y).unwrap(), &y.product(&x).unwrap()) / (1.0 + x.norm() * y.norm())
    }))
}

/// P(x) y against the associative product x y x (matrix kinds only).
pub fn quadratic_residual(alg: Algebra, trials: usize, seed: u64, exec: Exec) -> Option<f64> {
    if !alg.is_matrix_kind() {
        return None;
    }
    Some(max(exec.map_range(0..trials, |t| {
        let mut r = rng::stream(seed ^ 0x22, t as u64);
        let x = alg.random_element(&mut r);
        let y = alg.random_element(&mut r);
        let (mx, my) = (x.to_matrix().unwrap(), y.to_matrix().unwrap());
        let want = Element::from_matrix(alg, &(&mx * &my * &mx)).unwrap();
        diff_norm(&x.quadratic(&y).unwrap(), &want) / (x.norm().powi(2) * y.norm()).max(f64::MIN_POSITIVE)
    })))
}

/// Smallest eigenvalue of the Gram matrix Tr L(b_i o b_j) of a random basis,
/// divided by the largest; positive iff the trace form is positive definite.
pub fn trace_form_min_eigen(alg: Algebra, seed: u64) -> f64 {
    let mut r = rng::stream(seed ^ 0x33, 0);
    let basis: Vec<Element> = (0..alg.dim()).map(|_| alg.random_element(&mut r)).collect();
    let n = basis.len();
    let g = DMatrix::from_fn(n, n, |i, j| basis[i].product(&basis[j]).unwrap().lmap().trace());
    let ev = SymmetricEigen::new(g).eigenvalues;
    ev.min() / ev.max()
}

/// Delta(a x) = a^r Delta(x), relative.
pub fn homogeneity_residual(alg: Algebra, trials: usize, seed: u64, exec: Exec) -> f64 {
    max(exec.map_range(0..trials, |t| {
        let mut r = rng::stream(seed ^ 0x44, t as u64);
        let x = alg.random_element(&mut r);
        let a = 0.5 + 2.0 * rand::Rng::random::<f64>(&mut r);
        let lhs = x.scale(a).det();
        let rhs = a.powi(alg.rank() as i32) * x.det();
        (lhs - rhs).abs() / (a * x.spectral_radius()).powi(alg.rank() as i32).max(f64::MIN_POSITIVE)
    }))
}

/// x o x^{-1} = e and x^2 o x^{-1} = x for random invertible x, and x^2 in the cone.
pub fn inverse_and_squares(alg: Algebra, trials: usize, seed: u64, exec: Exec) -> (f64, bool) {
    let rows = exec.map_range(0..trials, |t| {
        let mut r = rng::stream(seed ^ 0x55, t as u64);
        let x = alg.random_element(&mut r);
        let Ok(inv) = x.inverse() else {
            return (0.0, true);
        };
        let cond = x.spectral_radius() * inv.spectral_radius();
        let e1 = diff_norm(&x.product(&inv).unwrap(), &alg.unit());
        let e2 = diff_norm(&x.square().product(&inv).unwrap(), &x) / x.norm();
        ((e1.max(e2)) / cond.max(1.0), x.square().is_in_cone())
    });
    (max(rows.iter().map(|r| r.0)), rows.iter().all(|r| r.1))
}

/// max relative |det B(z, w) - h(z, w)^{2n/r}| over random ball points.
pub fn det_b_max_residual(alg: Algebra, points: usize, seed: u64, exec: Exec) -> f64 {
    max(exec.map_range(0..points, |t| {
        let mut r = rng::stream(seed ^ 0x66, t as u64);
        let z = ComplexElement::random_in_ball(alg, 0.95, &mut r);
        let w = ComplexElement::random_in_ball(alg, 0.95, &mut r);
        det_b_residual(&z, &w).unwrap_or(f64::INFINITY)
    }))
}

/// The full invariant suite for one algebra.
pub fn run(alg: Algebra, cfg: &JordanCheckConfig) -> Vec<Check> {
    let (n, s, ex) = (cfg.trials, cfg.seed, cfg.exec);
    let mut out = vec![Check::boolean(format!("{alg}: n_V = r + (d/2) r (r-1)"), alg.peirce_identity_holds())];
    out.push(Check::measured(format!("{alg}: commutativity"), commutativity_residual(alg, n, s, ex), cfg.tol));
    out.push(Check::measured(format!("{alg}: Jordan identity"), jordan_axiom_residual(alg, n, s, ex), cfg.tol));
    if let Some(q) = quadratic_residual(alg, n, s, ex) {
        out.push(Check::measured(format!("{alg}: P(x)y = xyx"), q, cfg.tol));
    }
    let g = trace_form_min_eigen(alg, s);
    out.push(Check::boolean(format!("{alg}: trace form positive definite"), g > 0.0).with_detail(format!("min/max eigenvalue {g:.3e}")));
    out.push(Check::measured(format!("{alg}: Delta homogeneous of degree r"), homogeneity_residual(alg, n, s, ex), cfg.tol));
    let (inv, squares) = inverse_and_squares(alg, n, s, ex);
    out.push(Check::measured(format!("{alg}: inverse identities"), inv, cfg.tol));
    out.push(Check::boolean(format!("{alg}: squares of invertibles lie in the cone"), squares));
    out.push(Check::measured(
        format!("{alg}: det B = h^{}", alg.bergman_exponent()),
        det_b_max_residual(alg, cfg.det_b_points, s, ex),
        cfg.det_b_tol,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_algebras() {
        let cfg = JordanCheckConfig { trials: 30, det_b_points: 10, ..Default::default() };
        for alg in [Algebra::sym(3).unwrap(), Algebra::herm(2).unwrap(), Algebra::spin(5).unwrap()] {
            for c in run(alg, &cfg) {
                assert!(c.passed(), "{c:?}");
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let a = Algebra::herm(3).unwrap();
        let s = jordan_axiom_residual(a, 40, 9, Exec::Sequential);
        let p = jordan_axiom_residual(a, 40, 9, Exec::Parallel);
        assert_eq!(s.to_bits(), p.to_bits());
    }
}
