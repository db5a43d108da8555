//! Covariance of the brackets under the weight-k slash action, checked on
//! closed-form holomorphic test functions.
//!
//! Derivatives of slashed functions are exact: f|_k gamma is expanded as a
//! truncated Taylor series (a jet) around z by composing jets, so no
//! numerical differentiation is involved.

use super::brackets::rcb_from_derivatives;
use crate::exec::Exec;
use crate::rng;
use crate::{Error, Result};
use num_complex::Complex64 as C;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// An element of SL(2, R) acting by Moebius transformations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moebius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Moebius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("ad - bc = {det}, expected 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn translation(x: f64) -> Self {
        Self { a: 1.0, b: x, c: 0.0, d: 1.0 }
    }

    /// z -> -1/z.
    pub fn inversion() -> Self {
        Self { a: 0.0, b: -1.0, c: 1.0, d: 0.0 }
    }

    pub fn compose(&self, o: &Moebius) -> Moebius {
        Moebius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// n(x) a(t) k(theta) with x in [-2, 2], t in [-1, 1], theta uniform.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let x = rng.random_range(-2.0..2.0);
        let t: f64 = rng.random_range(-1.0..1.0);
        let th: f64 = rng.random_range(0.0..2.0 * PI);
        let n = Moebius::translation(x);
        let a = Moebius { a: (t / 2.0).exp(), b: 0.0, c: 0.0, d: (-t / 2.0).exp() };
        let k = Moebius { a: th.cos(), b: -th.sin(), c: th.sin(), d: th.cos() };
        n.compose(&a).compose(&k)
    }

    pub fn cocycle(&self, z: C) -> C {
        self.c * z + self.d
    }

    pub fn apply(&self, z: C) -> C {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
}

/// Holomorphic functions on the upper half-plane with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TestFunction {
    /// exp(i a z), a > 0.
    Exp { a: f64 },
    /// (z - w0)^{-k}, Im w0 < 0.
    Pole { w0: C, k: u32 },
}

impl TestFunction {
    pub fn exp(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain { name: "a", value: a, constraint: "a > 0" });
        }
        Ok(TestFunction::Exp { a })
    }

    pub fn pole(w0: C, k: u32) -> Result<Self> {
        if !(w0.im < 0.0) {
            return Err(Error::Domain { name: "Im w0", value: w0.im, constraint: "Im w0 < 0" });
        }
        Ok(TestFunction::Pole { w0, k })
    }

    pub fn eval(&self, z: C) -> C {
        self.derivatives(z, 0)[0]
    }

    /// f(z), f'(z), ..., f^{(m)}(z).
    pub fn derivatives(&self, z: C, m: usize) -> Vec<C> {
        match *self {
            TestFunction::Exp { a } => {
                let ia = C::new(0.0, a);
                let e = (ia * z).exp();
                let mut out = Vec::with_capacity(m + 1);
                let mut p = C::new(1.0, 0.0);
                for _ in 0..=m {
                    out.push(p * e);
                    p *= ia;
                }
                out
            }
            TestFunction::Pole { w0, k } => {
                let u = z - w0;
                let mut out = Vec::with_capacity(m + 1);
                let mut coef = 1.0;
                for r in 0..=m {
                    out.push(coef * u.powi(-(k as i32) - r as i32));
                    coef *= -(k as f64) - r as f64;
                }
                out
            }
        }
    }
}

/// Truncated Taylor series sum_{i <= m} c_i eps^i.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<C>);

impl Jet {
    pub fn constant(v: C, m: usize) -> Self {
        let mut c = vec![C::new(0.0, 0.0); m + 1];
        c[0] = v;
        Jet(c)
    }

    /// z0 + eps.
    pub fn variable(z0: C, m: usize) -> Self {
        let mut j = Self::constant(z0, m);
        if m >= 1 {
            j.0[1] = C::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: C) -> Jet {
        Jet(self.0.iter().map(|a| a * s).collect())
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let m = self.order();
        let mut out = vec![C::new(0.0, 0.0); m + 1];
        for i in 0..=m {
            for j in 0..=m - i {
                out[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(out)
    }

    /// 1 / self; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Jet> {
        let c0 = self.0[0];
        if c0 == C::new(0.0, 0.0) {
            return Err(Error::InvalidArgument("jet with zero constant term is not invertible".into()));
        }
        let m = self.order();
        let mut out = vec![C::new(0.0, 0.0); m + 1];
        out[0] = 1.0 / c0;
        for n in 1..=m {
            let s: C = (1..=n).map(|k| self.0[k] * out[n - k]).sum();
            out[n] = -s / c0;
        }
        Ok(Jet(out))
    }

    pub fn powi(&self, e: i32) -> Result<Jet> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Jet::constant(C::new(1.0, 0.0), self.order());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// f(self) from the derivatives of f at the constant term.
    pub fn compose(&self, derivs: &[C]) -> Jet {
        let m = self.order();
        let mut delta = self.clone();
        delta.0[0] = C::new(0.0, 0.0);
        let mut out = Jet::constant(derivs[0], m);
        let mut power = Jet::constant(C::new(1.0, 0.0), m);
        let mut fact = 1.0;
        for (p, d) in derivs.iter().enumerate().take(m + 1).skip(1) {
            power = power.mul(&delta);
            fact *= p as f64;
            out = out.add(&power.scale(d / fact));
        }
        out
    }

    /// k-th derivative at the base point: k! c_k.
    pub fn derivative(&self, k: usize) -> C {
        let f: f64 = (1..=k).map(|i| i as f64).product();
        self.0[k] * f
    }
}

fn check_point(g: &Moebius, z: C) -> Result<()> {
    if !(z.im > 0.0) {
        return Err(Error::Domain { name: "Im z", value: z.im, constraint: "Im z > 0" });
    }
    if g.cocycle(z).norm() < 1e-300 {
        return Err(Error::InvalidArgument(format!("cz + d vanishes at z = {z}")));
    }
    Ok(())
}

/// (f|_k gamma)(z) = (cz + d)^{-k} f(gamma z).
pub fn slash_action(f: &TestFunction, k: i64, g: &Moebius, z: C) -> Result<C> {
    check_point(g, z)?;
    Ok(g.cocycle(z).powi(-(k as i32)) * f.eval(g.apply(z)))
}

/// Derivatives 0..=m of f|_k gamma at z, by jet composition.
pub fn slashed_derivatives(f: &TestFunction, k: i64, g: &Moebius, z: C, m: usize) -> Result<Vec<C>> {
    check_point(g, z)?;
    let zj = Jet::variable(z, m);
    let num = zj.scale(C::new(g.a, 0.0)).add(&Jet::constant(C::new(g.b, 0.0), m));
    let den = zj.scale(C::new(g.c, 0.0)).add(&Jet::constant(C::new(g.d, 0.0), m));
    let w = num.mul(&den.recip()?);
    let fw = w.compose(&f.derivatives(w.0[0], m));
    let h = den.powi(-(k as i32))?.mul(&fw);
    Ok((0..=m).map(|i| h.derivative(i)).collect())
}

/// Residual of F_j(f|g, g|g) - F_j(f, g)|_{k1+k2+2j} g at one point, and the
/// term-magnitude scale of the right-hand side.
pub fn covariance_at(
    f: &TestFunction,
    g: &TestFunction,
    k1: i64,
    k2: i64,
    j: u32,
    gamma: &Moebius,
    z: C,
) -> Result<(f64, f64)> {
    let m = j as usize;
    let df = slashed_derivatives(f, k1, gamma, z, m)?;
    let dg = slashed_derivatives(g, k2, gamma, z, m)?;
    let (lhs, lscale) = rcb_from_derivatives(&df, &dg, k1, k2, j)?;
    let w = gamma.apply(z);
    let (inner, iscale) = rcb_from_derivatives(&f.derivatives(w, m), &g.derivatives(w, m), k1, k2, j)?;
    let factor = gamma.cocycle(z).powi(-((k1 + k2 + 2 * j as i64) as i32));
    let rhs = factor * inner;
    Ok(((lhs - rhs).norm(), lscale.max(iscale * factor.norm())))
}

/// max over points of the covariance residual, divided by the largest
/// term magnitude seen.
pub fn covariance_residual(
    f: &TestFunction,
    g: &TestFunction,
    k1: i64,
    k2: i64,
    j: u32,
    gamma: &Moebius,
    points: &[C],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &z in points {
        let (r, s) = covariance_at(f, g, k1, k2, j, gamma, z)?;
        worst = worst.max(r);
        scale = scale.max(s);
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// Which test functions a randomized covariance run draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Exp,
    Pole,
    Mixed,
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceTrial {
    pub j: u32,
    pub k1: i64,
    pub k2: i64,
    pub f: TestFunction,
    pub g: TestFunction,
    pub gamma: Moebius,
    pub z: C,
    pub residual: f64,
}

fn random_function<R: Rng + ?Sized>(family: Family, rng: &mut R) -> TestFunction {
    let use_exp = match family {
        Family::Exp => true,
        Family::Pole => false,
        Family::Mixed => rng.random_bool(0.5),
    };
    if use_exp {
        TestFunction::Exp { a: rng.random_range(0.5..2.0) }
    } else {
        let w0 = C::new(rng.random_range(-1.0..1.0), -rng.random_range(0.5..1.5));
        TestFunction::Pole { w0, k: rng.random_range(1..4) }
    }
}

/// `trials` random (gamma, z, f, g, k1, k2) draws for each j in 0..=j_max;
/// each trial's residual is relative to its own term scale.
pub fn covariance_trials(j_max: u32, trials: usize, family: Family, seed: u64, exec: Exec) -> Result<Vec<CovarianceTrial>> {
    let jobs: Vec<(u32, usize)> = (0..=j_max).flat_map(|j| (0..trials).map(move |t| (j, t))).collect();
    exec.map_slice(&jobs, |&(j, t)| {
        let mut r = rng::stream(seed, ((j as u64) << 32) | t as u64);
        let gamma = Moebius::random(&mut r);
        let z = C::new(r.random_range(-2.0..2.0), r.random_range(0.3..2.0));
        let k1 = r.random_range(1..=8);
        let k2 = r.random_range(1..=8);
        let f = random_function(family, &mut r);
        let g = random_function(family, &mut r);
        let (res, scale) = covariance_at(&f, &g, k1, k2, j, &gamma, z)?;
        Ok(CovarianceTrial { j, k1, k2, f, g, gamma, z, residual: if scale > 0.0 { res / scale } else { res } })
    })
    .into_iter()
    .collect()
}
