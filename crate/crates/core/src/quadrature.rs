//! Gaussian rules and a graded half-line integrator.

use crate::exec::{pairwise_sum, Exec};
use crate::gamma::{gamma, ln_gamma};
use crate::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

/// Nodes and weights of an interpolatory rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine map from [-1, 1] onto [a, b]. Only meaningful for rules whose
    /// weight function is invariant under the map (Legendre), or when the
    /// caller accounts for the Jacobian of the weight separately.
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|x| c + h * x).collect(),
            weights: self.weights.iter().map(|w| w * h).collect(),
        }
    }

    pub fn integrate<T: Quantity>(&self, f: impl Fn(f64) -> T) -> T {
        let terms: Vec<T> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .collect();
        pairwise_sum(&terms)
    }
}

/// Scalars that quadrature can accumulate.
pub trait Quantity:
    Copy + Send + Sync + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl Quantity for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Quantity for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// n-point Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Golub-Welsch: nodes and weights from a Jacobi matrix with diagonal `a`,
/// off-diagonal `b` and total mass `mu0`.
fn golub_welsch(a: &[f64], b: &[f64], mu0: f64) -> Rule {
    let n = a.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = a[i];
        if i + 1 < n {
            j[(i, i + 1)] = b[i];
            j[(i + 1, i)] = b[i];
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// n-point Gauss-Jacobi for the weight (1-x)^alpha (1+x)^beta on [-1, 1].
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Rule> {
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::Domain {
            name: "jacobi exponent",
            value: alpha.min(beta),
            constraint: "> -1",
        });
    }
    assert!(n > 0);
    let ab = alpha + beta;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n.saturating_sub(1)];
    a[0] = (beta - alpha) / (ab + 2.0);
    for (k, ak) in a.iter_mut().enumerate().skip(1) {
        let k = k as f64;
        let s = 2.0 * k + ab;
        *ak = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (i, bk) in b.iter_mut().enumerate() {
        let k = (i + 1) as f64;
        let s = 2.0 * k + ab;
        let b2 = if i == 0 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        *bk = b2.sqrt();
    }
    let ln_mu0 = (ab + 1.0) * 2f64.ln() + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(ab + 2.0);
    Ok(golub_welsch(&a, &b, ln_mu0.exp()))
}

/// n-point generalized Gauss-Laguerre for the weight x^alpha e^{-x} on (0, inf).
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Rule> {
    if alpha <= -1.0 {
        return Err(Error::Domain {
            name: "laguerre exponent",
            value: alpha,
            constraint: "> -1",
        });
    }
    assert!(n > 0);
    let a: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let b: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
    Ok(golub_welsch(&a, &b, gamma(alpha + 1.0)))
}

/// Integral over [0, L] of s^p g(s), with g smooth.
pub fn power_weighted(rule_p: &Rule, p: f64, len: f64, g: impl Fn(f64) -> f64) -> f64 {
    // rule_p must be gauss_jacobi(n, 0, p)
    let scale = (len / 2.0).powf(p + 1.0);
    scale * rule_p.integrate(|x| g(len * (1.0 + x) / 2.0))
}

/// Composite Gauss-Legendre on [0, inf) with geometrically growing panels.
///
/// The first panel [0, x0] uses Gauss-Jacobi for an integrable power
/// singularity x^p at the origin. Beyond the last panel the integrand is
/// assumed to follow a power law and the tail is summed as a geometric
/// series of panel integrals; a ratio close to one is reported as divergence.
#[derive(Debug, Clone)]
pub struct HalfLine {
    pub x0: f64,
    pub ratio: f64,
    pub panels: usize,
    pub order: usize,
    pub origin_exponent: f64,
    cap: Rule,
    panel_rule: Rule,
}

/// Value of a half-line integral plus diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct HalfLineValue<T> {
    pub value: T,
    pub tail: T,
    /// ratio of the last two panel magnitudes
    pub tail_ratio: f64,
}

impl HalfLine {
    pub fn new(x0: f64, ratio: f64, panels: usize, order: usize, origin_exponent: f64) -> Result<Self> {
        if !(x0 > 0.0 && ratio > 1.0 && panels >= 2 && order >= 2) {
            return Err(Error::InvalidArgument(format!(
                "half-line grid x0={x0} ratio={ratio} panels={panels} order={order}"
            )));
        }
        Ok(Self {
            x0,
            ratio,
            panels,
            order,
            origin_exponent,
            cap: gauss_jacobi(order, 0.0, origin_exponent)?,
            panel_rule: gauss_legendre(order),
        })
    }

    /// Default grid for an integrand whose features live at length `scale`.
    pub fn standard(scale: f64, origin_exponent: f64) -> Result<Self> {
        Self::new(0.25 * scale, 2.0, 52, 20, origin_exponent)
    }

    /// Same reach with every geometric panel split into `2^level` panels.
    pub fn refined(&self, level: u32) -> Result<Self> {
        let k = 1usize << level;
        Self::new(
            self.x0,
            self.ratio.powf(1.0 / k as f64),
            self.panels * k,
            self.order,
            self.origin_exponent,
        )
    }

    /// Same grid with a different number of nodes per panel.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::new(self.x0, self.ratio, self.panels, order, self.origin_exponent)
    }

    /// Number of integrand evaluations per call.
    pub fn evaluations(&self) -> usize {
        self.order * (self.panels + 1)
    }

    /// All nodes and weights, cap first. The cap weights already include the
    /// x^p factor, so callers pass f(x) / x^p at cap nodes; see `integrate`.
    fn node_list(&self) -> (Vec<f64>, Vec<f64>, usize) {
        let p = self.origin_exponent;
        let mut xs = Vec::with_capacity(self.evaluations());
        let mut ws = Vec::with_capacity(self.evaluations());
        let half = self.x0 / 2.0;
        let cap_scale = half.powf(p + 1.0);
        for (x, w) in self.cap.nodes.iter().zip(&self.cap.weights) {
            xs.push(half * (1.0 + x));
            ws.push(w * cap_scale);
        }
        let ncap = xs.len();
        let mut a = self.x0;
        for _ in 0..self.panels {
            let b = a * self.ratio;
            let h = 0.5 * (b - a);
            let c = 0.5 * (a + b);
            for (x, w) in self.panel_rule.nodes.iter().zip(&self.panel_rule.weights) {
                xs.push(c + h * x);
                ws.push(w * h);
            }
            a = b;
        }
        (xs, ws, ncap)
    }

    /// Integrate f over [0, inf).
    pub fn integrate<T, F>(&self, exec: Exec, f: F) -> Result<HalfLineValue<T>>
    where
        T: Quantity,
        F: Fn(f64) -> T + Sync + Send,
    {
        let (xs, ws, ncap) = self.node_list();
        let p = self.origin_exponent;
        let vals = exec.map_range(0..xs.len(), |i| {
            let x = xs[i];
            let fx = f(x);
            if i < ncap {
                if p == 0.0 {
                    fx * ws[i]
                } else {
                    fx * (ws[i] / x.powf(p))
                }
            } else {
                fx * ws[i]
            }
        });
        self.assemble(&vals, ncap)
    }

    fn assemble<T: Quantity>(&self, vals: &[T], ncap: usize) -> Result<HalfLineValue<T>> {
        let m = self.order;
        let cap = pairwise_sum(&vals[..ncap]);
        let panels: Vec<T> = (0..self.panels)
            .map(|k| pairwise_sum(&vals[ncap + k * m..ncap + (k + 1) * m]))
            .collect();
        let body = cap + pairwise_sum(&panels);
        let last = panels[self.panels - 1];
        let prev = panels[self.panels - 2];
        let scale = body.magnitude().max(f64::MIN_POSITIVE);
        if last.magnitude() <= 1e-17 * scale {
            return Ok(HalfLineValue { value: body, tail: T::default(), tail_ratio: 0.0 });
        }
        let rho = last.magnitude() / prev.magnitude();
        if !rho.is_finite() || rho >= 0.995 {
            return Err(Error::Divergent(format!(
                "panel integrals stop decaying (ratio {rho:.4} at x = {:.3e})",
                self.x0 * self.ratio.powi(self.panels as i32)
            )));
        }
        let tail = last * (rho / (1.0 - rho));
        Ok(HalfLineValue { value: body + tail, tail, tail_ratio: rho })
    }
}
