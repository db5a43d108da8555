//! Even functions on the circle, the projective action of SL(2,R) and the
//! representations pi^-_mu, pi^+_mu.
//!
//! An even function phi(-s) = phi(s) is a function of theta mod pi and is
//! stored through its modes e_n(theta) = e^{2 i n theta}, n = -N..=N.

use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleFunction {
    /// coefficient of e_n at index n + N
    coeffs: Vec<C>,
}

impl CircleFunction {
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!("{} coefficients; need 2N + 1", coeffs.len())));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![C::new(0.0, 0.0); 2 * n + 1] }
    }

    /// The single mode e_k.
    pub fn mode(n: usize, k: i64) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[(k + n as i64) as usize] = C::new(1.0, 0.0);
        f
    }

    /// Largest mode index N.
    pub fn n(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> C {
        let i = k + self.n() as i64;
        if i < 0 || i as usize >= self.coeffs.len() {
            C::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn eval(&self, theta: f64) -> C {
        let n = self.n() as i64;
        let step = C::from_polar(1.0, 2.0 * theta);
        let mut e = C::from_polar(1.0, -2.0 * n as f64 * theta);
        let mut acc = C::new(0.0, 0.0);
        for c in &self.coeffs {
            acc += c * e;
            e *= step;
        }
        acc
    }

    /// ||phi||^2 for the normalized measure d theta / pi.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn samples(&self, grid: usize) -> Vec<C> {
        (0..grid).map(|j| self.eval(PI * j as f64 / grid as f64)).collect()
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let coeffs = (0..=2 * n)
            .map(|i| {
                let d = 0.6f64.powi((i as i64 - n as i64).abs() as i32);
                C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * d
            })
            .collect();
        Self { coeffs }
    }
}

/// Result of reprojecting grid samples onto 2N + 1 modes.
#[derive(Debug, Clone)]
pub struct Projection {
    pub function: CircleFunction,
    /// fraction of the sampled energy in modes beyond N
    pub aliasing: f64,
}

/// Modes -N..=N of samples on theta_j = pi j / M. Needs M > 2N.
pub fn project(samples: &[C], n: usize) -> Result<Projection> {
    let m = samples.len();
    if m <= 2 * n {
        return Err(Error::InvalidArgument(format!("grid of {m} points cannot resolve {} modes", 2 * n + 1)));
    }
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let all: f64 = buf.iter().map(|c| c.norm_sqr()).sum::<f64>() * scale * scale;
    let coeffs: Vec<C> = (-(n as i64)..=n as i64).map(|k| buf[k.rem_euclid(m as i64) as usize] * scale).collect();
    let kept: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let aliasing = if all > 0.0 { ((all - kept) / all).max(0.0) } else { 0.0 };
    Ok(Projection { function: CircleFunction { coeffs }, aliasing })
}

/// Trapezoid estimate of ||.||^2 (measure d theta / pi) from grid samples;
/// spectrally accurate for smooth periodic data.
pub fn sampled_norm_sq(samples: &[C]) -> f64 {
    samples.iter().map(|c| c.norm_sqr()).sum::<f64>() / samples.len() as f64
}

/// g = [[a, b], [c, d]] with ad - bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GroupElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > 1e-12 * (1.0 + a.abs() * d.abs() + b.abs() * c.abs()) {
            return Err(Error::InvalidArgument(format!("det = {det}, not 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn rotation(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self { a: c, b: -s, c: s, d: c }
    }

    /// diag(e^t, e^{-t}).
    pub fn boost(t: f64) -> Self {
        Self { a: t.exp(), b: 0.0, c: 0.0, d: (-t).exp() }
    }

    pub fn diag(a: f64) -> Result<Self> {
        if a == 0.0 {
            return Err(Error::InvalidArgument("diag(a, 1/a) needs a != 0".into()));
        }
        Ok(Self { a, b: 0.0, c: 0.0, d: 1.0 / a })
    }

    pub fn shear(x: f64) -> Self {
        Self { a: 1.0, b: x, c: 0.0, d: 1.0 }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn transpose(&self) -> Self {
        Self { a: self.a, b: self.c, c: self.b, d: self.d }
    }

    /// theta(g) = (g^T)^{-1}.
    pub fn theta(&self) -> Self {
        self.transpose().inverse()
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    /// k(alpha) diag(e^t, e^-t) k(beta) with |t| <= t_max.
    pub fn random(t_max: f64, rng: &mut impl Rng) -> Self {
        let t = if t_max > 0.0 { rng.random_range(-t_max..t_max) } else { 0.0 };
        Self::rotation(rng.random_range(0.0..PI))
            .mul(&Self::boost(t))
            .mul(&Self::rotation(rng.random_range(0.0..PI)))
    }
}

/// Angle of g(s)/||g(s)|| folded to [0, pi), and ||g(s)||, for s = (cos theta, sin theta).
pub fn projective_action(g: &GroupElement, theta: f64) -> (f64, f64) {
    let w = g.apply([theta.cos(), theta.sin()]);
    let r = w[0].hypot(w[1]);
    (w[1].atan2(w[0]).rem_euclid(PI), r)
}

/// Samples of (pi^-_mu(g) phi)(s) = phi(g^{-1}.s) ||g^{-1}(s)||^mu.
pub fn pi_minus_samples(mu: C, g: &GroupElement, phi: &CircleFunction, grid: usize) -> Vec<C> {
    let gi = g.inverse();
    (0..grid)
        .map(|j| {
            let (t, r) = projective_action(&gi, PI * j as f64 / grid as f64);
            phi.eval(t) * C::new(r, 0.0).powc(mu)
        })
        .collect()
}

pub fn pi_minus(mu: C, g: &GroupElement, phi: &CircleFunction, grid: usize) -> Result<Projection> {
    project(&pi_minus_samples(mu, g, phi, grid), phi.n())
}

/// pi^+_mu(g) = pi^-_mu(theta(g)).
pub fn pi_plus(mu: C, g: &GroupElement, phi: &CircleFunction, grid: usize) -> Result<Projection> {
    pi_minus(mu, &g.theta(), phi, grid)
}

/// Matrix of pi^-_mu(g) (or pi^+ when `plus`) on modes -N..=N:
/// entry (m, n) is the m-th coefficient of pi(g) e_n.
pub fn representation_matrix(mu: C, g: &GroupElement, n: usize, grid: usize, plus: bool) -> Result<nalgebra::DMatrix<C>> {
    let h = if plus { g.theta() } else { *g };
    let dim = 2 * n + 1;
    let mut out = nalgebra::DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let e = CircleFunction::mode(n, k as i64 - n as i64);
        let col = project(&pi_minus_samples(mu, &h, &e, grid), n)?;
        for (i, c) in col.function.coeffs().iter().enumerate() {
            out[(i, k)] = *c;
        }
    }
    Ok(out)
}
