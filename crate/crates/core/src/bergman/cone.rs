//! Functions on the cone (0, inf): closed-form probes, sampled data and
//! convolutions, with their Laplace transforms and weighted L2 norms.

use crate::gamma::{beta as beta_fn, gamma, ln_gamma};
use crate::quadrature::{gauss_jacobi, gauss_legendre, HalfLine, Quantity, Rule};
use crate::{Error, Exec, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const CONV_NODES: usize = 96;
const CELL_NODES: usize = 8;

#[derive(Debug, Clone)]
pub enum ConeFunction {
    /// c u^a e^{-b u}
    PowerExp { c: f64, a: f64, b: f64 },
    Sampled(Sampled),
    Convolution(Box<Convolution>),
}

/// Values on the uniform grid h, 2h, ..., n h = u_max; linear in between,
/// constant on (0, h], zero past u_max.
#[derive(Debug, Clone)]
pub struct Sampled {
    h: f64,
    values: Vec<f64>,
}

/// u * v with a Gauss-Jacobi rule matched to the origin behaviour of both
/// factors.
#[derive(Debug, Clone)]
pub struct Convolution {
    u: ConeFunction,
    v: ConeFunction,
    rule: Rule,
}

impl Sampled {
    pub fn new(u_max: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !(u_max > 0.0) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("sampled cone function needs >= 2 finite values on (0, u_max]".into()));
        }
        Ok(Self { h: u_max / values.len() as f64, values })
    }

    pub fn u_max(&self) -> f64 {
        self.h * self.values.len() as f64
    }

    fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 || u > self.u_max() {
            return 0.0;
        }
        let t = u / self.h - 1.0;
        if t <= 0.0 {
            return self.values[0];
        }
        let k = (t.floor() as usize).min(self.values.len() - 2);
        let s = t - k as f64;
        self.values[k] * (1.0 - s) + self.values[k + 1] * s
    }

    /// Cellwise Gauss rule over (0, u_max]; the first cell carries the
    /// weight u^p so integrable origin singularities are handled exactly.
    fn integrate<T: Quantity>(&self, p: f64, g: impl Fn(f64) -> T) -> Result<T> {
        let h = self.h;
        let first = gauss_jacobi(CELL_NODES, 0.0, p)?;
        let cap = (h / 2.0).powf(p + 1.0);
        let mut acc = T::default();
        for (x, w) in first.nodes.iter().zip(&first.weights) {
            let u = h * (1.0 + x) / 2.0;
            acc = acc + g(u) * (w * cap / u.powf(p));
        }
        let gl = gauss_legendre(CELL_NODES);
        for k in 1..self.values.len() {
            let cell = gl.mapped(k as f64 * h, (k + 1) as f64 * h);
            acc = acc + cell.integrate(&g);
        }
        Ok(acc)
    }
}

impl Convolution {
    fn new(u: ConeFunction, v: ConeFunction) -> Result<Self> {
        let rule = gauss_jacobi(CONV_NODES, u.origin_exponent(), v.origin_exponent())?;
        Ok(Self { u, v, rule })
    }

    fn eval(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let (pu, pv) = (self.u.origin_exponent(), self.v.origin_exponent());
        let half = tau / 2.0;
        let mut acc = 0.0;
        for (x, w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let (s, e) = (half * (1.0 - x), half * (1.0 + x));
            acc += w * self.u.eval(s) / s.powf(pu) * self.v.eval(e) / e.powf(pv);
        }
        acc * half.powf(pu + pv + 1.0)
    }
}

impl ConeFunction {
    pub fn power_exp(c: f64, a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0) || !(b > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("u^a e^(-bu) needs a >= 0, b > 0 (got a={a}, b={b})")));
        }
        Ok(ConeFunction::PowerExp { c, a, b })
    }

    pub fn zero() -> Self {
        ConeFunction::PowerExp { c: 0.0, a: 0.0, b: 1.0 }
    }

    pub fn sampled(u_max: f64, values: Vec<f64>) -> Result<Self> {
        Ok(ConeFunction::Sampled(Sampled::new(u_max, values)?))
    }

    pub fn convolution(u: &ConeFunction, v: &ConeFunction) -> Result<Self> {
        Ok(ConeFunction::Convolution(Box::new(Convolution::new(u.clone(), v.clone())?)))
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            ConeFunction::PowerExp { c, a, b } => {
                if u <= 0.0 {
                    return 0.0;
                }
                c * u.powf(*a) * (-b * u).exp()
            }
            ConeFunction::Sampled(s) => s.eval(u),
            ConeFunction::Convolution(cv) => cv.eval(u),
        }
    }

    /// p with f(u) ~ u^p as u -> 0.
    pub fn origin_exponent(&self) -> f64 {
        match self {
            ConeFunction::PowerExp { a, .. } => *a,
            ConeFunction::Sampled(_) => 0.0,
            ConeFunction::Convolution(cv) => cv.u.origin_exponent() + cv.v.origin_exponent() + 1.0,
        }
    }

    /// Length scale of the bulk of the function.
    pub fn scale(&self) -> f64 {
        match self {
            ConeFunction::PowerExp { a, b, .. } => a.max(1.0) / b,
            ConeFunction::Sampled(s) => s.u_max(),
            ConeFunction::Convolution(cv) => cv.u.scale() + cv.v.scale(),
        }
    }

    fn integrate<T: Quantity>(&self, p: f64, exec: Exec, g: impl Fn(f64) -> T + Sync + Send) -> Result<T> {
        match self {
            ConeFunction::Sampled(s) => s.integrate(p, g),
            _ => Ok(HalfLine::standard(self.scale(), p)?.integrate(exec, g)?.value),
        }
    }

    /// Closed-form transform (2 pi)^{-1/2} c Gamma(a+1) (b - i z)^{-(a+1)}.
    pub fn laplace_closed(&self, z: Complex64) -> Option<Complex64> {
        match self {
            ConeFunction::PowerExp { c, a, b } => {
                let w = Complex64::new(*b, 0.0) - Complex64::i() * z;
                Some(w.powf(-(a + 1.0)) * (c * gamma(a + 1.0) / (2.0 * PI).sqrt()))
            }
            _ => None,
        }
    }

    /// Closed-form ||f||^2_nu; None when not available. Infinite norms are
    /// reported as errors by [`cone_norm_sq`].
    pub fn norm_sq_closed(&self, nu: f64) -> Option<f64> {
        match self {
            ConeFunction::PowerExp { c, a, b } => {
                let e = 2.0 * a + 2.0 - nu;
                if e <= 0.0 {
                    return None;
                }
                Some(c * c * 2f64.powf(1.0 - nu) * (ln_gamma(e) - e * (2.0 * b).ln()).exp())
            }
            ConeFunction::Convolution(cv) => match (&cv.u, &cv.v) {
                (
                    ConeFunction::PowerExp { c: c1, a: a1, b: b1 },
                    ConeFunction::PowerExp { c: c2, a: a2, b: b2 },
                ) if b1 == b2 => {
                    let c = c1 * c2 * beta_fn(a1 + 1.0, a2 + 1.0);
                    ConeFunction::PowerExp { c, a: a1 + a2 + 1.0, b: *b1 }.norm_sq_closed(nu)
                }
                _ => None,
            },
            ConeFunction::Sampled(_) => None,
        }
    }
}

/// F(z) = (2 pi)^{-1/2} int_0^inf f(u) e^{i z u} du by quadrature.
pub fn laplace_transform(f: &ConeFunction, z: Complex64, exec: Exec) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::OutsideTube);
    }
    let iz = Complex64::i() * z;
    let v = f.integrate(f.origin_exponent(), exec, |u| (iz * u).exp() * f.eval(u))?;
    Ok(v / (2.0 * PI).sqrt())
}

/// ||f||^2_nu = int |f(u)|^2 (2u)^{1-nu} du.
pub fn cone_norm_sq(f: &ConeFunction, nu: f64, exec: Exec) -> Result<f64> {
    if !(nu > 1.0) {
        return Err(Error::Domain { name: "nu", value: nu, constraint: "nu > 1" });
    }
    if let ConeFunction::PowerExp { c, .. } = f {
        if *c == 0.0 {
            return Ok(0.0);
        }
    }
    let p = 2.0 * f.origin_exponent() + 1.0 - nu;
    if p <= -1.0 {
        return Err(Error::Divergent(format!("|f|^2 (2u)^(1-nu) ~ u^{p} is not integrable at the origin")));
    }
    f.integrate(p, exec, |u| {
        let v = f.eval(u);
        v * v * (2.0 * u).powf(1.0 - nu)
    })
}

pub fn cone_norm(f: &ConeFunction, nu: f64, exec: Exec) -> Result<f64> {
    cone_norm_sq(f, nu, exec).map(f64::sqrt)
}

/// (u * v)(tau) = int_0^tau u(tau - eta) v(eta) d eta.
pub fn cone_convolution(u: &ConeFunction, v: &ConeFunction, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain { name: "tau", value: tau, constraint: "tau > 0" });
    }
    Ok(Convolution::new(u.clone(), v.clone())?.eval(tau))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn transform_of_exponential() {
        let f = ConeFunction::power_exp(1.0, 0.0, 1.0).unwrap();
        for z in [c(0.0, 1.0), c(1.3, 0.2), c(-2.0, 0.7)] {
            let want = 1.0 / ((2.0 * PI).sqrt() * (1.0 - Complex64::i() * z));
            let got = laplace_transform(&f, z, Exec::Sequential).unwrap();
            assert!((got - want).norm() < 1e-12 * want.norm(), "{z}");
            assert!((f.laplace_closed(z).unwrap() - want).norm() < 1e-14);
        }
        assert!(matches!(laplace_transform(&f, c(0.0, 0.0), Exec::Sequential), Err(Error::OutsideTube)));
    }

    #[test]
    fn transform_of_u_squared() {
        let f = ConeFunction::power_exp(1.0, 2.0, 1.0).unwrap();
        let z = c(0.4, 0.9);
        let want = 2.0 / ((2.0 * PI).sqrt() * (1.0 - Complex64::i() * z).powi(3));
        let got = laplace_transform(&f, z, Exec::Parallel).unwrap();
        assert!((got - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn transform_is_linear() {
        let f = ConeFunction::power_exp(1.0, 1.5, 0.8).unwrap();
        let g = ConeFunction::power_exp(1.0, 2.0, 1.7).unwrap();
        let z = c(0.3, 0.5);
        let (a, b) = (2.5, -0.75);
        let vals: Vec<f64> = (1..=4000).map(|k| {
            let u = k as f64 * 0.01;
            a * f.eval(u) + b * g.eval(u)
        }).collect();
        // sampled data truncated at u = 40, where both terms are ~ e^{-30}
        let s = ConeFunction::sampled(40.0, vals).unwrap();
        let lin = laplace_transform(&s, z, Exec::Sequential).unwrap();
        let want = f.laplace_closed(z).unwrap() * a + g.laplace_closed(z).unwrap() * b;
        // linear interpolation error O(h^2)
        assert!((lin - want).norm() < 1e-4 * want.norm(), "{lin} {want}");
    }

    #[test]
    fn norm_example() {
        let f = ConeFunction::power_exp(1.0, 2.0, 1.0).unwrap();
        let n = cone_norm_sq(&f, 4.0, Exec::Sequential).unwrap();
        assert!((n - 1.0 / 32.0).abs() < 1e-14);
        assert!((f.norm_sq_closed(4.0).unwrap() - 1.0 / 32.0).abs() < 1e-15);
        assert!(cone_norm_sq(&f, 1.0, Exec::Sequential).is_err());
        // 2a + 1 - nu = -1 -> divergent at the origin
        let g = ConeFunction::power_exp(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(cone_norm_sq(&g, 3.0, Exec::Sequential), Err(Error::Divergent(_))));
        assert_eq!(cone_norm_sq(&ConeFunction::zero(), 3.0, Exec::Sequential).unwrap(), 0.0);
    }

    #[test]
    fn convolution_of_exponentials() {
        let e = ConeFunction::power_exp(1.0, 0.0, 1.0).unwrap();
        for tau in [0.1, 1.0, 3.7, 20.0] {
            let v = cone_convolution(&e, &e, tau).unwrap();
            assert!((v - tau * (-tau).exp()).abs() < 1e-14 * (1.0 + tau), "{tau}");
        }
        assert!(cone_convolution(&e, &e, 0.0).is_err());
    }

    #[test]
    fn convolution_is_symmetric() {
        let u = ConeFunction::power_exp(1.3, 0.7, 0.9).unwrap();
        let v = ConeFunction::power_exp(0.6, 2.2, 1.6).unwrap();
        for k in 1..=20 {
            let tau = 0.35 * k as f64;
            let a = cone_convolution(&u, &v, tau).unwrap();
            let b = cone_convolution(&v, &u, tau).unwrap();
            assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300), "{tau}");
        }
    }

    #[test]
    fn convolution_norm_closed_form() {
        let u = ConeFunction::power_exp(1.0, 1.0, 1.5).unwrap();
        let v = ConeFunction::power_exp(2.0, 0.5, 1.5).unwrap();
        let w = ConeFunction::convolution(&u, &v).unwrap();
        let q = cone_norm_sq(&w, 5.0, Exec::Parallel).unwrap();
        let want = w.norm_sq_closed(5.0).unwrap();
        assert!((q - want).abs() < 1e-11 * want);
    }
}
