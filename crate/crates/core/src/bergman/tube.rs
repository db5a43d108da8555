//! Holomorphic functions on the upper half-plane and weighted area
//! integrals over it.

use super::cone::ConeFunction;
use crate::gamma::{beta as beta_fn, gamma, ln_gamma};
use crate::quadrature::{HalfLine, Quantity};
use crate::{Error, Exec, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

pub trait TubeFunction: Send + Sync {
    fn eval(&self, z: Complex64) -> Complex64;

    /// Horizontal feature size near the real axis.
    fn scale(&self) -> f64 {
        1.0
    }
}

impl<F: Fn(Complex64) -> Complex64 + Send + Sync> TubeFunction for F {
    fn eval(&self, z: Complex64) -> Complex64 {
        self(z)
    }
}

/// c (beta - i z)^{-s}: the transform of a multiple of u^{s-1} e^{-beta u}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerProbe {
    pub c: Complex64,
    pub beta: f64,
    pub s: f64,
}

impl PowerProbe {
    pub fn new(c: Complex64, beta: f64, s: f64) -> Result<Self> {
        if !(beta > 0.0) || !(s > 0.0) {
            return Err(Error::InvalidArgument(format!("(beta - iz)^(-s) needs beta, s > 0 (got {beta}, {s})")));
        }
        Ok(Self { c, beta, s })
    }

    pub fn zero() -> Self {
        Self { c: Complex64::new(0.0, 0.0), beta: 1.0, s: 1.0 }
    }

    /// Transform of c u^a e^{-bu}.
    pub fn transform_of(f: &ConeFunction) -> Result<Self> {
        match f {
            ConeFunction::PowerExp { c, a, b } => {
                Self::new(Complex64::new(c * gamma(a + 1.0) / (2.0 * PI).sqrt(), 0.0), *b, a + 1.0)
            }
            _ => Err(Error::InvalidArgument("only u^a e^(-bu) has a power-probe transform".into())),
        }
    }

    /// d/dz c (beta - iz)^{-s} = i s c (beta - iz)^{-s-1}.
    pub fn derivative(&self) -> Self {
        Self { c: Complex64::i() * self.c * self.s, beta: self.beta, s: self.s + 1.0 }
    }

    /// ||F||^2_nu = |c|^2 sqrt(pi) Gamma(s-1/2)/Gamma(s) beta^{nu-2s} B(nu-1, 2s-nu).
    pub fn norm_sq_closed(&self, nu: f64) -> Result<f64> {
        if !(nu > 1.0) {
            return Err(Error::Domain { name: "nu", value: nu, constraint: "nu > 1" });
        }
        if self.c == Complex64::new(0.0, 0.0) {
            return Ok(0.0);
        }
        if !(2.0 * self.s > nu) {
            return Err(Error::Divergent(format!("(beta - iz)^(-{}) is not in the weight-{nu} space", self.s)));
        }
        let inner = PI.sqrt() * (ln_gamma(self.s - 0.5) - ln_gamma(self.s)).exp();
        Ok(self.c.norm_sqr() * inner * self.beta.powf(nu - 2.0 * self.s) * beta_fn(nu - 1.0, 2.0 * self.s - nu))
    }
}

impl TubeFunction for PowerProbe {
    fn eval(&self, z: Complex64) -> Complex64 {
        let w = Complex64::new(self.beta, 0.0) - Complex64::i() * z;
        self.c * w.powf(-self.s)
    }

    fn scale(&self) -> f64 {
        self.beta
    }
}

/// Pointwise product of probes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeProduct(pub Vec<PowerProbe>);

impl TubeFunction for ProbeProduct {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().fold(Complex64::new(1.0, 0.0), |acc, p| acc * p.eval(z))
    }

    fn scale(&self) -> f64 {
        self.0.iter().map(|p| p.beta).fold(f64::INFINITY, f64::min)
    }
}

/// Grid for upper half-plane integrals: the same graded half-line is used
/// for y in (0, inf) and, rescaled by (scale + y), for both halves of the
/// x-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureScheme {
    /// first panel edge as a fraction of the problem scale
    pub cap: f64,
    pub ratio: f64,
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        Self { cap: 0.25, ratio: 2.0, panels: 36, order: 20 }
    }
}

impl QuadratureScheme {
    /// Deliberately coarse grid for convergence studies.
    pub fn coarse() -> Self {
        Self { cap: 0.25, ratio: 4.0, panels: 18, order: 4 }
    }

    /// Split every panel into 2^level and shrink the origin cap by the same
    /// factor, adding panels so the reach is unchanged.
    pub fn refined(&self, level: u32) -> Self {
        let k = (1usize << level) as f64;
        let ratio = self.ratio.powf(1.0 / k);
        let extra = (k.ln() / ratio.ln()).round() as usize;
        Self { cap: self.cap / k, ratio, panels: self.panels * k as usize + extra, order: self.order }
    }

    pub fn half_line(&self, scale: f64, origin_exponent: f64) -> Result<HalfLine> {
        HalfLine::new(self.cap * scale, self.ratio, self.panels, self.order, origin_exponent)
    }

    /// int_0^inf int_R g(x + iy) y^p dx dy. `g` should already include the
    /// factor y^p; the grid only uses p to resolve the origin.
    pub fn tube_integral<T, G>(&self, p: f64, scale: f64, center: f64, exec: Exec, g: G) -> Result<T>
    where
        T: Quantity,
        G: Fn(Complex64) -> T + Sync + Send,
    {
        let outer = self.half_line(scale, p)?;
        let inner = self.half_line(1.0, 0.0)?;
        let failure: OnceLock<Error> = OnceLock::new();
        let v = outer.integrate(exec, |y| {
            let len = scale + y;
            let r = inner.integrate(Exec::Sequential, |t| {
                let dx = len * t;
                g(Complex64::new(center + dx, y)) + g(Complex64::new(center - dx, y))
            });
            match r {
                Ok(v) => v.value * len,
                Err(e) => {
                    let _ = failure.set(e);
                    T::default()
                }
            }
        });
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(v?.value)
    }
}

/// ||F||^2_nu = int int |F(x+iy)|^2 y^{nu-2} dx dy.
pub fn tube_norm_sq(f: &dyn TubeFunction, nu: f64, scheme: &QuadratureScheme, exec: Exec) -> Result<f64> {
    if !(nu > 1.0) {
        return Err(Error::Domain { name: "nu", value: nu, constraint: "nu > 1" });
    }
    scheme.tube_integral(nu - 2.0, f.scale(), 0.0, exec, |z| f.eval(z).norm_sqr() * z.im.powf(nu - 2.0))
}

pub fn tube_norm(f: &dyn TubeFunction, nu: f64, scheme: &QuadratureScheme, exec: Exec) -> Result<f64> {
    tube_norm_sq(f, nu, scheme, exec).map(f64::sqrt)
}

/// Largest |dF/dx + i dF/dy| relative to |dF/dx| over the points, by central
/// differences with step h.
pub fn cauchy_riemann_residual(f: &dyn TubeFunction, points: &[Complex64], h: f64) -> f64 {
    points
        .iter()
        .map(|&z| {
            let hx = Complex64::new(h, 0.0);
            let hy = Complex64::new(0.0, h);
            let fx = (f.eval(z + hx) - f.eval(z - hx)) / (2.0 * h);
            let fy = (f.eval(z + hy) - f.eval(z - hy)) / (2.0 * h);
            let den = fx.norm().max(fy.norm());
            if den == 0.0 {
                0.0
            } else {
                (fx + Complex64::i() * fy).norm() / den
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::beta;

    #[test]
    fn norm_of_transform_example() {
        let f = ConeFunction::power_exp(1.0, 2.0, 1.0).unwrap();
        let p = PowerProbe::transform_of(&f).unwrap();
        assert!((p.norm_sq_closed(4.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        // analytic oracle (3/4) B(3, 2)
        assert!((0.75 * beta(3.0, 2.0) - 1.0 / 16.0).abs() < 1e-16);
        let q = tube_norm_sq(&p, 4.0, &QuadratureScheme::default(), Exec::Parallel).unwrap();
        assert!((q - 1.0 / 16.0).abs() < 1e-10, "{q}");
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for (beta, s, nu) in [(1.0, 3.0, 4.0), (0.5, 1.4, 2.5), (2.0, 2.2, 1.5)] {
            let p = PowerProbe::new(Complex64::new(0.3, -1.1), beta, s).unwrap();
            let q = tube_norm_sq(&p, nu, &QuadratureScheme::default(), Exec::Parallel).unwrap();
            let want = p.norm_sq_closed(nu).unwrap();
            assert!((q - want).abs() < 1e-9 * want, "{beta} {s} {nu}: {q} vs {want}");
        }
    }

    #[test]
    fn divergent_norms_are_reported() {
        let p = PowerProbe::new(Complex64::new(1.0, 0.0), 1.0, 1.0).unwrap();
        assert!(p.norm_sq_closed(2.5).is_err());
        assert!(tube_norm_sq(&p, 2.5, &QuadratureScheme::default(), Exec::Parallel).is_err());
        assert!(tube_norm_sq(&p, 1.0, &QuadratureScheme::default(), Exec::Parallel).is_err());
    }

    #[test]
    fn probes_are_holomorphic() {
        let p = PowerProbe::new(Complex64::new(1.0, 2.0), 0.7, 2.5).unwrap();
        let pts: Vec<Complex64> =
            (0..25).map(|k| Complex64::new(-2.0 + 0.17 * k as f64, 0.2 + 0.1 * (k % 7) as f64)).collect();
        assert!(cauchy_riemann_residual(&p, &pts, 1e-5) < 1e-8);
        // conj is not
        let bad = |z: Complex64| z.conj() * z.conj();
        assert!(cauchy_riemann_residual(&bad, &pts, 1e-5) > 0.5);
    }

    #[test]
    fn derivative_probe() {
        let p = PowerProbe::new(Complex64::new(0.0, 1.0), 1.0, 3.0).unwrap();
        let d = p.derivative();
        let z = Complex64::new(0.3, 0.8);
        let h = 1e-6;
        let fd = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
        assert!((fd - d.eval(z)).norm() < 1e-8 * d.eval(z).norm());
    }

    #[test]
    fn refinement_keeps_reach() {
        let base = QuadratureScheme::default();
        let s = base.refined(2);
        assert_eq!(s.panels, 144 + 8);
        let reach = |q: &QuadratureScheme| q.cap * q.ratio.powi(q.panels as i32);
        assert!((reach(&s) / reach(&base) - 1.0).abs() < 1e-9);
    }
}
