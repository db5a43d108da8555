//! The intertwiner A_mu phi(s) = int_0^pi |<s,t>|^{-mu-2} phi(t) dt, its
//! K-type eigenvalues and the scalar c(mu) = lambda_n(mu) lambda_n(-mu-2).
//!
//! The measure is d theta on [0, pi), so A_{-2} phi = (int phi) 1 and
//! lambda_0(-2) = pi.

use super::circle::{project, representation_matrix, CircleFunction, GroupElement};
use crate::gamma::{gamma_c, is_pole, rgamma_c};
use crate::quadrature::{gauss_jacobi, Rule};
use crate::{Error, Exec, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// lambda_n(mu) = pi 2^{mu+2} Gamma(-mu-1) / (Gamma(-mu/2+n) Gamma(-mu/2-n)).
pub fn a_mu_eigenvalue(n: i64, mu: C) -> Result<C> {
    let g = -mu - 1.0;
    if is_pole(g) {
        return Err(Error::Pole(format!("Gamma(-mu-1) at mu = {mu}")));
    }
    let h = -mu / 2.0;
    let n = n.unsigned_abs() as f64;
    let two = re(2.0).powc(mu + 2.0);
    Ok(PI * two * gamma_c(g) * rgamma_c(h + n) * rgamma_c(h - n))
}

/// Eigenvalues for n = -N..=N.
pub fn eigenvalues(mu: C, n: usize) -> Result<Vec<C>> {
    (-(n as i64)..=n as i64).map(|k| a_mu_eigenvalue(k, mu)).collect()
}

/// c(mu) = pi Gamma((mu+1)/2) Gamma(-(mu+1)/2) / (Gamma(-mu/2) Gamma(1+mu/2)).
///
/// Written in t = mu + 1, the expression is even in t; t is put in the right
/// half plane first so that c(mu) and c(-mu-2) agree bit for bit.
pub fn c_mu(mu: C) -> Result<C> {
    let mut t = mu + 1.0;
    if t.re < 0.0 || (t.re == 0.0 && t.im < 0.0) {
        t = -t;
    }
    let (a, b) = (t / 2.0, -t / 2.0);
    if is_pole(a) || is_pole(b) {
        return Err(Error::Pole(format!("Gamma((mu+1)/2) Gamma(-(mu+1)/2) at mu = {mu}")));
    }
    Ok(PI * gamma_c(a) * gamma_c(b) * rgamma_c((1.0 - t) / 2.0) * rgamma_c((1.0 + t) / 2.0))
}

/// d(s) = pi^{-1/2} Gamma((1+is)/2) / Gamma(is/2).
pub fn d_s(s: f64) -> C {
    gamma_c(C::new(0.5, s / 2.0)) * rgamma_c(C::new(0.0, s / 2.0)) / PI.sqrt()
}

/// Quadrature for A_mu on a circle grid, real mu < -1.
///
/// With t = s + pi/2 + sigma the kernel becomes |sin sigma|^beta, beta =
/// -mu-2 > -1, and the integral folds onto [0, pi/2] with Gauss-Jacobi
/// weight sigma^beta.
#[derive(Debug, Clone)]
pub struct AMuQuadrature {
    mu: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl AMuQuadrature {
    pub fn new(mu: f64, order: usize) -> Result<Self> {
        if !(mu < -1.0) {
            return Err(Error::Domain { name: "mu", value: mu, constraint: "mu < -1 for the A_mu quadrature" });
        }
        let beta = -mu - 2.0;
        let rule: Rule = gauss_jacobi(order, 0.0, beta)?;
        let half = PI / 4.0;
        let scale = half.powf(beta + 1.0);
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let sigma = half * (1.0 + x);
            nodes.push(sigma);
            weights.push(w * scale * (sigma.sin() / sigma).powf(beta));
        }
        Ok(Self { mu, nodes, weights })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// (A_mu phi)(theta) for any periodic phi.
    pub fn apply_at(&self, phi: impl Fn(f64) -> C, theta: f64) -> C {
        let c = theta + PI / 2.0;
        self.nodes.iter().zip(&self.weights).map(|(s, w)| (phi(c + s) + phi(c - s)) * *w).sum()
    }
}

/// A_mu phi reprojected onto the modes of phi; needs real mu < -1.
pub fn a_mu_apply(mu: f64, phi: &CircleFunction, grid: usize, exec: Exec) -> Result<CircleFunction> {
    let q = AMuQuadrature::new(mu, 64)?;
    let samples = exec.map_range(0..grid, |j| q.apply_at(|t| phi.eval(t), PI * j as f64 / grid as f64));
    Ok(project(&samples, phi.n())?.function)
}

/// Matrix of A_mu on modes -N..=N by quadrature: column n is A_mu e_n.
pub fn a_mu_matrix(mu: f64, n: usize, grid: usize, exec: Exec) -> Result<DMatrix<C>> {
    let dim = 2 * n + 1;
    let cols: Vec<Result<CircleFunction>> =
        exec.map_range(0..dim, |k| a_mu_apply(mu, &CircleFunction::mode(n, k as i64 - n as i64), grid, Exec::Sequential));
    let mut m = DMatrix::zeros(dim, dim);
    for (k, col) in cols.into_iter().enumerate() {
        for (i, c) in col?.coeffs().iter().enumerate() {
            m[(i, k)] = *c;
        }
    }
    Ok(m)
}

/// Largest off-diagonal entry relative to the largest diagonal one.
pub fn off_diagonal_leakage(m: &DMatrix<C>) -> f64 {
    let diag = (0..m.nrows()).map(|i| m[(i, i)].norm()).fold(0.0, f64::max);
    let mut off = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                off = off.max(m[(i, j)].norm());
            }
        }
    }
    if diag == 0.0 {
        off
    } else {
        off / diag
    }
}

/// Spectral norm.
pub fn op_norm(m: &DMatrix<C>) -> f64 {
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenPath {
    /// Gamma-quotient eigenvalues, any mu off the poles
    ClosedForm,
    /// quadrature matrix of A_mu, real mu < -1
    Quadrature,
}

/// Grid size that resolves pi(g) e_n for |n| <= N.
pub fn default_grid(n: usize) -> usize {
    (32 * (2 * n + 1)).next_power_of_two().max(1024)
}

/// max over both signs of || A_mu pi^s_mu(g) - pi^{-s}_{-mu-2}(g) A_mu ||_2 / || A_mu pi^s_mu(g) ||_2
/// on modes -N..=N.
pub fn intertwining_residual(mu: C, g: &GroupElement, n: usize, path: EigenPath, exec: Exec) -> Result<f64> {
    let grid = default_grid(n);
    let a = match path {
        EigenPath::ClosedForm => DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eigenvalues(mu, n)?)),
        EigenPath::Quadrature => {
            if mu.im != 0.0 {
                return Err(Error::Domain { name: "Im mu", value: mu.im, constraint: "real mu for the quadrature path" });
            }
            a_mu_matrix(mu.re, n, grid, exec)?
        }
    };
    let dual = -mu - 2.0;
    let mut worst = 0.0f64;
    for plus in [true, false] {
        let p = representation_matrix(mu, g, n, grid, plus)?;
        let q = representation_matrix(dual, g, n, grid, !plus)?;
        let lhs = &a * p;
        let r = &lhs - q * &a;
        let den = op_norm(&lhs);
        worst = worst.max(if den == 0.0 { op_norm(&r) } else { op_norm(&r) / den });
    }
    Ok(worst)
}
