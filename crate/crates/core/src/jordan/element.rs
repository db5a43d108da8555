use super::coords;
use super::{Algebra, Kind};
use crate::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative threshold below which the Jordan determinant counts as zero.
pub const SINGULAR_TOL: f64 = 1e-12;

/// An element of the real algebra V_0 in orthonormal coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    algebra: Algebra,
    coords: Vec<f64>,
}

impl Element {
    pub fn new(algebra: Algebra, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), got: coords.len() });
        }
        Ok(Self { algebra, coords })
    }

    pub(crate) fn from_coords_unchecked(algebra: Algebra, coords: Vec<f64>) -> Self {
        Self { algebra, coords }
    }

    /// Build a matrix-kind element from a real symmetric matrix (row-major).
    pub fn from_sym_matrix(algebra: Algebra, rows: &[&[f64]]) -> Result<Self> {
        if algebra.kind() != Kind::Sym || rows.len() != algebra.n() {
            return Err(Error::InvalidArgument(format!("{algebra} does not take a {}x? matrix", rows.len())));
        }
        let n = algebra.n();
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        let c = coords::from_matrix(algebra, &m);
        Ok(Self { algebra, coords: c.iter().map(|v| v.re).collect() })
    }

    /// Diagonal element diag(d_1, ..., d_n) of a matrix kind.
    pub fn diagonal(algebra: Algebra, d: &[f64]) -> Result<Self> {
        if !algebra.is_matrix_kind() || d.len() != algebra.n() {
            return Err(Error::InvalidArgument(format!("diagonal of length {} in {algebra}", d.len())));
        }
        let n = algebra.n();
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(if i == j { d[i] } else { 0.0 }, 0.0));
        let c = coords::from_matrix(algebra, &m);
        Ok(Self { algebra, coords: c.iter().map(|v| v.re).collect() })
    }

    /// Spin-factor element from (x', x_n).
    pub fn spin(algebra: Algebra, xp: &[f64], xn: f64) -> Result<Self> {
        if algebra.kind() != Kind::Spin || xp.len() + 1 != algebra.n() {
            return Err(Error::InvalidArgument(format!("spin vector of length {} in {algebra}", xp.len() + 1)));
        }
        let mut c = xp.to_vec();
        c.push(xn);
        Ok(Self { algebra, coords: c })
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    fn complex(&self) -> Vec<Complex64> {
        coords::to_complex(&self.coords)
    }

    fn real(algebra: Algebra, c: Vec<Complex64>) -> Self {
        Self { algebra, coords: c.into_iter().map(|v| v.re).collect() }
    }

    /// Matrix model (real part only for Sym; Hermitian for Herm).
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        if !self.algebra.is_matrix_kind() {
            return Err(Error::InvalidArgument("spin factor has no matrix model".into()));
        }
        Ok(coords::to_matrix(self.algebra, &self.complex()))
    }

    pub fn from_matrix(algebra: Algebra, m: &DMatrix<Complex64>) -> Result<Self> {
        if !algebra.is_matrix_kind() || m.nrows() != algebra.n() || m.ncols() != algebra.n() {
            return Err(Error::InvalidArgument(format!("{}x{} matrix for {algebra}", m.nrows(), m.ncols())));
        }
        Ok(Self::real(algebra, coords::from_matrix(algebra, m)))
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        let c = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self { algebra: self.algebra, coords: c })
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        let c = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(Self { algebra: self.algebra, coords: c })
    }

    pub fn scale(&self, s: f64) -> Element {
        Self { algebra: self.algebra, coords: self.coords.iter().map(|a| a * s).collect() }
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Jordan product x o y.
    pub fn product(&self, other: &Element) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        Ok(Self::real(self.algebra, coords::product(self.algebra, &self.complex(), &other.complex())))
    }

    pub fn square(&self) -> Element {
        let c = self.complex();
        Self::real(self.algebra, coords::product(self.algebra, &c, &c))
    }

    /// L(x) as a dim x dim matrix.
    pub fn lmap(&self) -> DMatrix<f64> {
        coords::lmap(self.algebra, &self.complex()).map(|v| v.re)
    }

    /// P(x) = 2 L(x)^2 - L(x^2).
    pub fn pmap(&self) -> DMatrix<f64> {
        let l = self.lmap();
        &l * &l * 2.0 - self.square().lmap()
    }

    /// P(x) y.
    pub fn quadratic(&self, y: &Element) -> Result<Element> {
        self.algebra.check_same(&y.algebra)?;
        let v = self.pmap() * nalgebra::DVector::from_column_slice(&y.coords);
        Ok(Self { algebra: self.algebra, coords: v.iter().copied().collect() })
    }

    /// D(x, y) = L(xy) - [L(x), L(y)].
    pub fn dmap(&self, y: &Element) -> Result<DMatrix<f64>> {
        let xy = self.product(y)?;
        let (lx, ly) = (self.lmap(), y.lmap());
        Ok(xy.lmap() - (&lx * &ly - &ly * &lx))
    }

    /// Trace form tr(x o y).
    pub fn trace_form(&self, other: &Element) -> Result<f64> {
        Ok(self.product(other)?.trace())
    }

    /// Jordan eigenvalues in ascending order (roots of the minimal polynomial,
    /// counted with the multiplicity of the generic characteristic polynomial).
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.algebra.kind() {
            Kind::Sym | Kind::Herm => {
                let m = coords::to_matrix(self.algebra, &self.complex());
                let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
                ev.sort_by(f64::total_cmp);
                ev
            }
            Kind::Spin => {
                let n = self.algebra.n();
                let r = self.coords[..n - 1].iter().map(|a| a * a).sum::<f64>().sqrt();
                let xn = self.coords[n - 1];
                vec![xn - r, xn + r]
            }
        }
    }

    /// (a_1, ..., a_r) with f_x(l) = l^r - a_1 l^{r-1} + ... + (-1)^r a_r.
    pub fn char_coeffs(&self) -> Vec<f64> {
        if self.algebra.kind() == Kind::Spin {
            return vec![self.trace(), self.det()];
        }
        // elementary symmetric polynomials of the eigenvalues
        let ev = self.eigenvalues();
        let mut e = vec![0.0; ev.len() + 1];
        e[0] = 1.0;
        for (k, &l) in ev.iter().enumerate() {
            for j in (1..=k + 1).rev() {
                e[j] += l * e[j - 1];
            }
        }
        e[1..].to_vec()
    }

    /// Jordan determinant Delta(x) = a_r.
    pub fn det(&self) -> f64 {
        match self.algebra.kind() {
            Kind::Sym | Kind::Herm => coords::det(self.algebra, &self.complex()).re,
            Kind::Spin => {
                let n = self.algebra.n();
                let xn = self.coords[n - 1];
                xn * xn - self.coords[..n - 1].iter().map(|a| a * a).sum::<f64>()
            }
        }
    }

    /// Jordan trace tr(x) = a_1.
    pub fn trace(&self) -> f64 {
        match self.algebra.kind() {
            Kind::Sym | Kind::Herm => {
                let m = coords::to_matrix(self.algebra, &self.complex());
                m.trace().re
            }
            Kind::Spin => 2.0 * self.coords[self.algebra.n() - 1],
        }
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |m: f64, l| m.max(l.abs()))
    }

    /// |Delta(x)| <= SINGULAR_TOL * rho(x)^r.
    pub fn is_singular(&self) -> bool {
        let scale = self.spectral_radius().powi(self.algebra.rank() as i32);
        self.det().abs() <= SINGULAR_TOL * scale || scale == 0.0
    }

    pub fn inverse(&self) -> Result<Element> {
        if self.is_singular() {
            return Err(Error::Singular { det: self.det() });
        }
        let inv = coords::inverse(self.algebra, &self.complex()).ok_or(Error::Singular { det: self.det() })?;
        Ok(Self::real(self.algebra, inv))
    }

    /// Membership in the open cone: all Jordan eigenvalues strictly positive.
    pub fn is_in_cone(&self) -> bool {
        self.eigenvalues().iter().all(|&l| l > 0.0)
    }

    /// Membership in the closed cone with slack `tol * (1 + rho(x))`.
    pub fn is_in_closed_cone(&self, tol: f64) -> bool {
        let slack = tol * (1.0 + self.spectral_radius());
        self.eigenvalues().iter().all(|&l| l >= -slack)
    }
}
