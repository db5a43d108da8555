//! Two-variable symbols and the covariant product.
//!
//! A symbol f(u, v) on S x S is carried by its kernel
//! M_f(u, v) = f(u, v) |<u,v>|^mu, stored as modes
//! M_f = sum F_mn e_m(u) conj(e_n(v)). The operator of f is M_f o A_mu, so
//! Op(f) Op(g) = Op(h) with M_h = M_f A_mu M_g, i.e. H = pi F Lambda G where
//! Lambda = diag(lambda_n(mu)) is continued to mu in (-1, 0).

use super::circle::{projective_action, GroupElement};
use super::intertwiner::a_mu_eigenvalue;
use crate::gamma::gamma;
use crate::quadrature::gauss_jacobi;
use crate::{Error, Exec, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;
use std::f64::consts::PI;

type C = Complex64;

/// <u, v> for unit vectors at angles u, v.
pub fn pairing(u: f64, v: f64) -> f64 {
    (u - v).cos()
}

/// [u, y, x, v] = <u,x><y,v> / (<u,v><y,x>).
pub fn cross_ratio(u: f64, y: f64, x: f64, v: f64) -> f64 {
    pairing(u, x) * pairing(y, v) / (pairing(u, v) * pairing(y, x))
}

fn check_window(mu: f64) -> Result<()> {
    if mu > -1.0 && mu < 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { name: "mu", value: mu, constraint: "-1 < mu < 0" })
    }
}

fn modes(n: usize, theta: f64) -> Vec<C> {
    (-(n as i64)..=n as i64).map(|k| C::from_polar(1.0, 2.0 * k as f64 * theta)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    mu: f64,
    coeffs: DMatrix<C>,
}

impl Symbol {
    pub fn new(mu: f64, coeffs: DMatrix<C>) -> Result<Self> {
        check_window(mu)?;
        if coeffs.nrows() != coeffs.ncols() || coeffs.nrows() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "symbol modes must be (2N+1) x (2N+1), got {} x {}",
                coeffs.nrows(),
                coeffs.ncols()
            )));
        }
        Ok(Self { mu, coeffs })
    }

    pub fn zero(mu: f64, n: usize) -> Result<Self> {
        Self::new(mu, DMatrix::zeros(2 * n + 1, 2 * n + 1))
    }

    /// The unit for the product: Op(1) is the identity on modes -N..=N.
    pub fn identity(mu: f64, n: usize) -> Result<Self> {
        check_window(mu)?;
        let lam = lambdas(mu, n)?;
        Self::new(mu, DMatrix::from_fn(2 * n + 1, 2 * n + 1, |i, j| if i == j { C::new(1.0 / (PI * lam[i]), 0.0) } else { C::new(0.0, 0.0) }))
    }

    /// Random kernel modes up to `active`, decaying geometrically, padded to N.
    pub fn random(mu: f64, active: usize, n: usize, rng: &mut impl Rng) -> Result<Self> {
        let a = active.min(n) as i64;
        let dim = 2 * n + 1;
        let mut m = DMatrix::zeros(dim, dim);
        for i in -a..=a {
            for j in -a..=a {
                let d = 0.5f64.powi((i.abs() + j.abs()) as i32);
                m[((i + n as i64) as usize, (j + n as i64) as usize)] =
                    C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * d;
            }
        }
        Self::new(mu, m)
    }

    /// Project a smooth kernel function M(u, v) onto modes -N..=N.
    pub fn from_kernel_fn(mu: f64, n: usize, grid: usize, exec: Exec, m: impl Fn(f64, f64) -> C + Sync + Send) -> Result<(Self, f64)> {
        let k = KernelOperator::sample(grid, exec, m);
        let (coeffs, aliasing) = k.to_modes(n)?;
        Ok((Self::new(mu, coeffs)?, aliasing))
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn n(&self) -> usize {
        (self.coeffs.nrows() - 1) / 2
    }

    pub fn coeffs(&self) -> &DMatrix<C> {
        &self.coeffs
    }

    /// Same symbol with modes -N'..=N', N' >= N.
    pub fn padded(&self, n: usize) -> Self {
        let cur = self.n();
        if n <= cur {
            return self.clone();
        }
        let off = n - cur;
        let mut m = DMatrix::zeros(2 * n + 1, 2 * n + 1);
        m.view_mut((off, off), (2 * cur + 1, 2 * cur + 1)).copy_from(&self.coeffs);
        Self { mu: self.mu, coeffs: m }
    }

    /// M_f(u, v).
    pub fn kernel(&self, u: f64, v: f64) -> C {
        let n = self.n();
        let eu = modes(n, u);
        let ev = modes(n, v);
        let mut acc = C::new(0.0, 0.0);
        for (i, a) in eu.iter().enumerate() {
            let mut row = C::new(0.0, 0.0);
            for (j, b) in ev.iter().enumerate() {
                row += self.coeffs[(i, j)] * b.conj();
            }
            acc += a * row;
        }
        acc
    }

    /// f(u, v) = M_f(u, v) |<u,v>|^{-mu}; vanishes on <u,v> = 0.
    pub fn value(&self, u: f64, v: f64) -> C {
        self.kernel(u, v) * pairing(u, v).abs().powf(-self.mu)
    }

    /// Modes of the kernel of Op(f) = M_f A_mu, i.e. F Lambda.
    pub fn operator_modes(&self) -> Result<DMatrix<C>> {
        let lam = lambdas(self.mu, self.n())?;
        let mut m = self.coeffs.clone();
        for (j, l) in lam.iter().enumerate() {
            m.column_mut(j).scale_mut(*l);
        }
        Ok(m)
    }

    /// ||Op(f)||_HS with the measure d theta.
    pub fn hs_norm(&self) -> Result<f64> {
        Ok(PI * self.operator_modes()?.norm())
    }

    /// L_x f(u, v) = f(x^{-1}.u, x^T.v), reprojected. Its kernel is
    /// M_f(x^{-1}.u, x^T.v) (||x^{-1}u|| ||x^T v||)^mu.
    pub fn translated(&self, x: &GroupElement, n: usize, grid: usize, exec: Exec) -> Result<(Self, f64)> {
        let xi = x.inverse();
        let xt = x.transpose();
        let mu = self.mu;
        Self::from_kernel_fn(mu, n, grid, exec, |u, v| {
            let (a, ra) = projective_action(&xi, u);
            let (b, rb) = projective_action(&xt, v);
            self.kernel(a, b) * (ra * rb).powf(mu)
        })
    }

    /// Kernel of L_x f evaluated directly.
    pub fn translated_kernel(&self, x: &GroupElement, u: f64, v: f64) -> C {
        let (a, ra) = projective_action(&x.inverse(), u);
        let (b, rb) = projective_action(&x.transpose(), v);
        self.kernel(a, b) * (ra * rb).powf(self.mu)
    }
}

/// Real eigenvalues lambda_n(mu), n = -N..=N, for real mu off the poles.
pub fn lambdas(mu: f64, n: usize) -> Result<Vec<f64>> {
    (-(n as i64)..=n as i64).map(|k| a_mu_eigenvalue(k, C::new(mu, 0.0)).map(|l| l.re)).collect()
}

/// f #_mu g: the symbol of Op(f) o Op(g).
pub fn sharp_product(f: &Symbol, g: &Symbol) -> Result<Symbol> {
    if f.mu != g.mu {
        return Err(Error::InvalidArgument(format!("symbols at mu = {} and {}", f.mu, g.mu)));
    }
    let n = f.n().max(g.n());
    let (f, g) = (f.padded(n), g.padded(n));
    let fl = f.operator_modes()?;
    Symbol::new(f.mu, fl * g.coeffs * C::new(PI, 0.0))
}

/// Kernel matrix on the staggered grid u_i = pi i / M, v_j = pi (j + 1/2) / M.
///
/// The half step keeps <u_i, v_j> away from zero for even M.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOperator {
    values: DMatrix<C>,
}

impl KernelOperator {
    pub fn grid_point(grid: usize, i: usize) -> f64 {
        PI * i as f64 / grid as f64
    }

    pub fn dual_point(grid: usize, j: usize) -> f64 {
        PI * (j as f64 + 0.5) / grid as f64
    }

    pub fn sample(grid: usize, exec: Exec, k: impl Fn(f64, f64) -> C + Sync + Send) -> Self {
        let rows = exec.map_range(0..grid, |i| {
            let u = Self::grid_point(grid, i);
            (0..grid).map(|j| k(u, Self::dual_point(grid, j))).collect::<Vec<_>>()
        });
        Self { values: DMatrix::from_fn(grid, grid, |i, j| rows[i][j]) }
    }

    pub fn from_values(values: DMatrix<C>) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::InvalidArgument("kernel grid must be square".into()));
        }
        Ok(Self { values })
    }

    /// Evaluate kernel modes on a grid of M points.
    pub fn from_modes(coeffs: &DMatrix<C>, grid: usize, exec: Exec) -> Self {
        let n = (coeffs.nrows() - 1) / 2;
        let eu: Vec<Vec<C>> = (0..grid).map(|i| modes(n, Self::grid_point(grid, i))).collect();
        let ev: Vec<Vec<C>> = (0..grid).map(|j| modes(n, Self::dual_point(grid, j))).collect();
        // row i of (E_u F)
        let rows = exec.map_range(0..grid, |i| {
            let r: Vec<C> = (0..coeffs.ncols()).map(|b| (0..coeffs.nrows()).map(|a| eu[i][a] * coeffs[(a, b)]).sum()).collect();
            (0..grid).map(|j| r.iter().zip(&ev[j]).map(|(x, e)| x * e.conj()).sum()).collect::<Vec<C>>()
        });
        Self { values: DMatrix::from_fn(grid, grid, |i, j| rows[i][j]) }
    }

    pub fn grid(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &DMatrix<C> {
        &self.values
    }

    /// Modes -N..=N in both variables and the fraction of energy beyond them.
    pub fn to_modes(&self, n: usize) -> Result<(DMatrix<C>, f64)> {
        let m = self.grid();
        if m <= 2 * n {
            return Err(Error::InvalidArgument(format!("grid of {m} points cannot resolve {} modes", 2 * n + 1)));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        let mut a = self.values.clone();
        // along u: sum_i K_ij e^{-2 i k u_i}
        for j in 0..m {
            let mut col: Vec<C> = a.column(j).iter().cloned().collect();
            fwd.process(&mut col);
            a.column_mut(j).copy_from_slice(&col);
        }
        // along v: sum_j X_kj e^{2 i l v_j}, with the half-step phase
        for i in 0..m {
            let mut row: Vec<C> = a.row(i).iter().cloned().collect();
            inv.process(&mut row);
            for (j, x) in row.iter().enumerate() {
                a[(i, j)] = *x;
            }
        }
        let s = 1.0 / (m * m) as f64;
        let total: f64 = a.iter().map(|c| c.norm_sqr()).sum::<f64>() * s * s;
        let dim = 2 * n + 1;
        let idx = |k: i64| k.rem_euclid(m as i64) as usize;
        let coeffs = DMatrix::from_fn(dim, dim, |p, q| {
            let k = p as i64 - n as i64;
            let l = q as i64 - n as i64;
            a[(idx(k), idx(l))] * s * C::from_polar(1.0, PI * l as f64 / m as f64)
        });
        let kept: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let aliasing = if total > 0.0 { ((total - kept) / total).max(0.0) } else { 0.0 };
        Ok((coeffs, aliasing))
    }

    /// Riemann-sum HS norm, measure d theta.
    pub fn hs_norm(&self) -> f64 {
        PI / self.grid() as f64 * self.values.norm()
    }

    /// Apply to samples of phi on the dual grid; returns samples on the primal grid.
    pub fn apply(&self, phi: &[C]) -> Result<Vec<C>> {
        if phi.len() != self.grid() {
            return Err(Error::DimensionMismatch { expected: self.grid(), got: phi.len() });
        }
        let h = PI / self.grid() as f64;
        Ok((0..self.grid()).map(|i| (0..self.grid()).map(|j| self.values[(i, j)] * phi[j]).sum::<C>() * h).collect())
    }
}

/// Kernel f(u, v) |<u,v>|^mu of a symbol on the grid; -1 < mu < 0.
pub fn op_from_symbol(f: impl Fn(f64, f64) -> C + Sync + Send, mu: f64, grid: usize, exec: Exec) -> Result<KernelOperator> {
    check_window(mu)?;
    Ok(KernelOperator::sample(grid, exec, |u, v| f(u, v) * pairing(u, v).abs().powf(mu)))
}

/// Symbol values recovered from a kernel off the band |<u,v>| <= band.
#[derive(Debug, Clone)]
pub struct RecoveredSymbol {
    /// `None` inside the excision band
    pub values: Vec<Vec<Option<C>>>,
    pub coverage: f64,
}

pub fn symbol_from_kernel(k: &KernelOperator, mu: f64, band: f64) -> Result<RecoveredSymbol> {
    check_window(mu)?;
    if !(0.0..1.0).contains(&band) {
        return Err(Error::InvalidArgument(format!("excision band {band} leaves no grid points")));
    }
    let m = k.grid();
    let mut kept = 0usize;
    let values: Vec<Vec<Option<C>>> = (0..m)
        .map(|i| {
            let u = KernelOperator::grid_point(m, i);
            (0..m)
                .map(|j| {
                    let p = pairing(u, KernelOperator::dual_point(m, j)).abs();
                    (p > band).then(|| {
                        kept += 1;
                        k.values[(i, j)] * p.powf(-mu)
                    })
                })
                .collect()
        })
        .collect();
    Ok(RecoveredSymbol { values, coverage: kept as f64 / (m * m) as f64 })
}

/// ||f(u,v) |<u,v>|^mu||_L2 with Gauss-Jacobi across the singular line
/// <u,v> = 0; needs -1/2 < mu < 0.
pub fn hs_norm_singular(f: impl Fn(f64, f64) -> C, mu: f64, outer: usize, inner: usize) -> Result<f64> {
    if !(mu > -0.5 && mu < 0.0) {
        return Err(Error::Domain { name: "mu", value: mu, constraint: "-1/2 < mu < 0 for a finite HS norm" });
    }
    let p = 2.0 * mu;
    let rule = gauss_jacobi(inner, 0.0, p)?;
    let half = PI / 4.0;
    let scale = half.powf(p + 1.0);
    let mut total = 0.0;
    for k in 0..outer {
        let u = PI * k as f64 / outer as f64;
        let c = u + PI / 2.0;
        let mut s = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let sig = half * (1.0 + x);
            let smooth = (sig.sin() / sig).powf(p);
            s += w * smooth * (f(u, c + sig).norm_sqr() + f(u, c - sig).norm_sqr());
        }
        total += s * scale;
    }
    Ok((total * PI / outer as f64).sqrt())
}

/// Closed form of the HS norm of f = 1: (pi sqrt(pi) Gamma(mu+1/2)/Gamma(mu+1))^{1/2}.
pub fn hs_norm_of_one(mu: f64) -> f64 {
    (PI * PI.sqrt() * gamma(mu + 0.5) / gamma(mu + 1.0)).sqrt()
}

/// Quadrature for the real-space product formula
/// h(u,v) |<u,v>|^mu = int int M_f(u,x) |<x,y>|^{-mu-2} M_g(y,v) dx dy,
/// the inner integral taken as a Hadamard finite part.
#[derive(Debug, Clone)]
pub struct FinitePartRule {
    mu: f64,
    outer: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// finite part of int_0^{pi/2} sin^beta
    fp: f64,
}

impl FinitePartRule {
    pub fn new(mu: f64, outer: usize, inner: usize) -> Result<Self> {
        check_window(mu)?;
        let beta = -mu - 2.0;
        let rule = gauss_jacobi(inner, 0.0, beta + 2.0)?;
        let half = PI / 4.0;
        let scale = half.powf(beta + 3.0);
        let mut nodes = Vec::with_capacity(inner);
        let mut weights = Vec::with_capacity(inner);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let s = half * (1.0 + x);
            nodes.push(s);
            weights.push(w * scale * (s.sin() / s).powf(beta) / (s * s));
        }
        let fp = 0.5 * PI.sqrt() * gamma((beta + 1.0) / 2.0) / gamma(beta / 2.0 + 1.0);
        Ok(Self { mu, outer, nodes, weights, fp })
    }

    /// FP int_0^pi |cos(x - y)|^{-mu-2} psi(y) dy.
    fn inner(&self, x: f64, psi: impl Fn(f64) -> C) -> C {
        let c = x + PI / 2.0;
        let p0 = psi(c);
        let mut acc = p0 * (2.0 * self.fp);
        for (s, w) in self.nodes.iter().zip(&self.weights) {
            acc += (psi(c + s) + psi(c - s) - p0 * 2.0) * *w;
        }
        acc
    }
}

/// h(u, v) for h = f # g by the real-space double integral.
pub fn sharp_integral_formula(f: &Symbol, g: &Symbol, u: f64, v: f64, rule: &FinitePartRule) -> Result<C> {
    if f.mu != g.mu || f.mu != rule.mu {
        return Err(Error::InvalidArgument("symbols and rule at different mu".into()));
    }
    let p = pairing(u, v).abs();
    if p < 1e-12 {
        return Err(Error::InvalidArgument(format!("(u, v) = ({u}, {v}) lies on <u,v> = 0")));
    }
    let k = rule.outer;
    let mut acc = C::new(0.0, 0.0);
    for i in 0..k {
        let x = PI * (i as f64 + 0.5) / k as f64;
        let mf = f.kernel(u, x);
        if mf == C::new(0.0, 0.0) {
            continue;
        }
        acc += mf * rule.inner(x, |y| g.kernel(y, v));
    }
    Ok(acc * (PI / k as f64) * p.powf(-f.mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn modes_round_trip() {
        let mut r = rng::seeded(11);
        let f = Symbol::random(-0.5, 3, 5, &mut r).unwrap();
        let k = KernelOperator::from_modes(f.coeffs(), 32, Exec::Parallel);
        let (back, alias) = k.to_modes(5).unwrap();
        assert!((back - f.coeffs()).norm() < 1e-12);
        assert!(alias < 1e-20);
        let direct = f.kernel(KernelOperator::grid_point(32, 3), KernelOperator::dual_point(32, 7));
        assert!((k.values()[(3, 7)] - direct).norm() < 1e-13);
    }

    #[test]
    fn zero_and_rank_one() {
        let k = op_from_symbol(|_, _| C::new(0.0, 0.0), -0.5, 16, Exec::Sequential).unwrap();
        assert_eq!(k.hs_norm(), 0.0);
        let phi = |u: f64| C::new(u.cos().powi(2), 0.0);
        let psi = |v: f64| C::from_polar(1.0, 2.0 * v);
        let m = 16;
        let k = op_from_symbol(|u, v| phi(u) * psi(v), -0.5, m, Exec::Sequential).unwrap();
        for i in 0..m {
            for j in 0..m {
                let (u, v) = (KernelOperator::grid_point(m, i), KernelOperator::dual_point(m, j));
                let want = phi(u) * psi(v) * pairing(u, v).abs().powf(-0.5);
                assert!((k.values()[(i, j)] - want).norm() < 1e-14);
            }
        }
        assert!(op_from_symbol(|_, _| C::new(1.0, 0.0), -1.5, 8, Exec::Sequential).is_err());
    }

    #[test]
    fn symbol_round_trip_off_band() {
        let f = |u: f64, v: f64| C::new((u + 2.0 * v).sin(), (3.0 * u).cos());
        let k = op_from_symbol(f, -0.6, 64, Exec::Sequential).unwrap();
        let r = symbol_from_kernel(&k, -0.6, 0.1).unwrap();
        assert!(r.coverage > 0.9 && r.coverage < 1.0);
        for (i, row) in r.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    let want = f(KernelOperator::grid_point(64, i), KernelOperator::dual_point(64, j));
                    assert!((v - want).norm() < 1e-12);
                }
            }
        }
        assert!(symbol_from_kernel(&k, -0.6, 1.0).is_err());
    }

    #[test]
    fn hs_norm_of_constant_symbol() {
        let one = |_: f64, _: f64| C::new(1.0, 0.0);
        let q = hs_norm_singular(one, -0.25, 8, 40).unwrap();
        assert!((q - hs_norm_of_one(-0.25)).abs() < 1e-12 * q, "{q}");
        assert!(hs_norm_singular(one, -0.5, 8, 40).is_err());
    }

    #[test]
    fn cross_ratio_invariance() {
        let mut r = rng::seeded(12);
        for _ in 0..20 {
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
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{a} {b}");
        }
    }

    #[test]
    fn identity_and_zero() {
        let mut r = rng::seeded(13);
        let f = Symbol::random(-0.5, 3, 4, &mut r).unwrap();
        let id = Symbol::identity(-0.5, 4).unwrap();
        let h = sharp_product(&f, &id).unwrap();
        assert!((h.coeffs() - f.coeffs()).norm() < 1e-12 * f.coeffs().norm());
        let h = sharp_product(&id, &f).unwrap();
        assert!((h.coeffs() - f.coeffs()).norm() < 1e-12 * f.coeffs().norm());
        let z = Symbol::zero(-0.5, 4).unwrap();
        assert_eq!(sharp_product(&z, &f).unwrap().coeffs().norm(), 0.0);
        let rule = FinitePartRule::new(-0.5, 32, 32).unwrap();
        assert_eq!(sharp_integral_formula(&f, &z, 0.3, 1.0, &rule).unwrap(), C::new(0.0, 0.0));
    }

    #[test]
    fn finite_part_integral_matches_modes() {
        let mut r = rng::seeded(14);
        for mu in [-0.5, -0.2, -0.8] {
            let f = Symbol::random(mu, 3, 3, &mut r).unwrap();
            let g = Symbol::random(mu, 3, 3, &mut r).unwrap();
            let h = sharp_product(&f, &g).unwrap();
            let rule = FinitePartRule::new(mu, 40, 48).unwrap();
            for _ in 0..5 {
                let (u, v) = (r.random_range(0.0..PI), r.random_range(0.0..PI));
                let a = h.value(u, v);
                let b = sharp_integral_formula(&f, &g, u, v, &rule).unwrap();
                assert!((a - b).norm() < 1e-8 * h.coeffs().norm(), "{mu}: {a} {b}");
            }
        }
        let f = Symbol::random(-0.5, 1, 1, &mut r).unwrap();
        let rule = FinitePartRule::new(-0.5, 8, 8).unwrap();
        assert!(sharp_integral_formula(&f, &f, 0.2, 0.2 + PI / 2.0, &rule).is_err());
    }

    #[test]
    fn hs_is_submultiplicative_and_product_associative() {
        let mut r = rng::seeded(15);
        for _ in 0..10 {
            let f = Symbol::random(-0.4, 3, 5, &mut r).unwrap();
            let g = Symbol::random(-0.4, 2, 5, &mut r).unwrap();
            let h = Symbol::random(-0.4, 4, 5, &mut r).unwrap();
            let fg = sharp_product(&f, &g).unwrap();
            assert!(fg.hs_norm().unwrap() <= f.hs_norm().unwrap() * g.hs_norm().unwrap());
            let l = sharp_product(&fg, &h).unwrap();
            let rr = sharp_product(&f, &sharp_product(&g, &h).unwrap()).unwrap();
            assert!((l.coeffs() - rr.coeffs()).norm() < 1e-13 * l.coeffs().norm());
        }
    }

    #[test]
    fn translation_commutes_with_product() {
        let mut r = rng::seeded(16);
        let mu = -0.5;
        let f = Symbol::random(mu, 3, 3, &mut r).unwrap();
        let g = Symbol::random(mu, 3, 3, &mut r).unwrap();
        let h = sharp_product(&f, &g).unwrap();
        for x in [GroupElement::rotation(0.7), GroupElement::boost(0.25), GroupElement::shear(0.3)] {
            let (fx, a1) = f.translated(&x, 16, 256, Exec::Parallel).unwrap();
            let (gx, a2) = g.translated(&x, 16, 256, Exec::Parallel).unwrap();
            assert!(a1 < 1e-12 && a2 < 1e-12);
            let hx = sharp_product(&fx, &gx).unwrap();
            let mut worst = 0.0f64;
            let mut scale = 0.0f64;
            for _ in 0..20 {
                let (u, v) = (r.random_range(0.0..PI), r.random_range(0.0..PI));
                let want = h.translated_kernel(&x, u, v);
                worst = worst.max((hx.kernel(u, v) - want).norm());
                scale = scale.max(want.norm());
            }
            assert!(worst < 1e-5 * scale, "{x:?}: {worst} / {scale}");
        }
    }

    #[test]
    fn grid_operator_applies_kernel() {
        let mut r = rng::seeded(17);
        let f = Symbol::random(-0.5, 2, 2, &mut r).unwrap();
        let m = 64;
        let k = KernelOperator::from_modes(f.coeffs(), m, Exec::Sequential);
        // M_f applied to e_1 picks column 1 of F, times pi
        let phi: Vec<C> = (0..m).map(|j| C::from_polar(1.0, 2.0 * KernelOperator::dual_point(m, j))).collect();
        let out = k.apply(&phi).unwrap();
        let u = KernelOperator::grid_point(m, 5);
        let want: C = (-2..=2i64).map(|a| f.coeffs()[((a + 2) as usize, 3)] * C::from_polar(1.0, 2.0 * a as f64 * u)).sum::<C>() * PI;
        assert!((out[5] - want).norm() < 1e-12);
        assert!((k.hs_norm() - PI * f.coeffs().norm()).abs() < 1e-12);
    }
}
