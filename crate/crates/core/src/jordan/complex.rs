use super::coords;
use super::{Algebra, Element, Kind};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// An element z = x + i y of the complexification V = V_0 + i V_0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexElement {
    pub re: Element,
    pub im: Element,
}

/// Result of the Cayley transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Cayley {
    pub value: ComplexElement,
    pub spectral_norm: f64,
    /// True when the image sits on the unit sphere of the spectral norm
    /// (the input had a degenerate imaginary part).
    pub boundary: bool,
}

impl ComplexElement {
    pub fn new(re: Element, im: Element) -> Result<Self> {
        re.algebra().check_same(&im.algebra())?;
        Ok(Self { re, im })
    }

    pub fn real(x: Element) -> Self {
        let im = x.algebra().zero();
        Self { re: x, im }
    }

    pub fn from_coords(alg: Algebra, c: &[C]) -> Result<Self> {
        if c.len() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), got: c.len() });
        }
        Ok(Self::from_complex_unchecked(alg, c))
    }

    fn from_complex_unchecked(alg: Algebra, c: &[C]) -> Self {
        let re = Element::from_coords_unchecked(alg, c.iter().map(|v| v.re).collect());
        let im = Element::from_coords_unchecked(alg, c.iter().map(|v| v.im).collect());
        Self { re, im }
    }

    /// Matrix-kind element from a complex matrix (complex-linear in entries).
    /// For Sym the matrix must be complex symmetric.
    pub fn from_matrix(alg: Algebra, m: &DMatrix<C>) -> Result<Self> {
        if !alg.is_matrix_kind() || m.nrows() != alg.n() || m.ncols() != alg.n() {
            return Err(Error::InvalidArgument(format!("{}x{} matrix for {alg}", m.nrows(), m.ncols())));
        }
        Ok(Self::from_complex_unchecked(alg, &coords::from_matrix(alg, m)))
    }

    pub fn to_matrix(&self) -> Result<DMatrix<C>> {
        if !self.algebra().is_matrix_kind() {
            return Err(Error::InvalidArgument("spin factor has no matrix model".into()));
        }
        Ok(coords::to_matrix(self.algebra(), &self.coords()))
    }

    /// Scalar multiple of the unit, s e.
    pub fn scalar(alg: Algebra, s: C) -> Self {
        let e = alg.unit();
        Self { re: e.scale(s.re), im: e.scale(s.im) }
    }

    pub fn zero(alg: Algebra) -> Self {
        Self { re: alg.zero(), im: alg.zero() }
    }

    pub fn algebra(&self) -> Algebra {
        self.re.algebra()
    }

    pub fn coords(&self) -> Vec<C> {
        self.re.coords().iter().zip(self.im.coords()).map(|(&a, &b)| C::new(a, b)).collect()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.scale(-1.0) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { re: self.re.add(&other.re)?, im: self.im.add(&other.im)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { re: self.re.sub(&other.re)?, im: self.im.sub(&other.im)? })
    }

    pub fn scale(&self, s: C) -> Self {
        let c: Vec<C> = self.coords().iter().map(|v| v * s).collect();
        Self::from_complex_unchecked(self.algebra(), &c)
    }

    /// Hermitian norm of the coordinate vector.
    pub fn coord_norm(&self) -> f64 {
        (self.re.norm().powi(2) + self.im.norm().powi(2)).sqrt()
    }

    /// Complex-bilinear Jordan product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.algebra().check_same(&other.algebra())?;
        let alg = self.algebra();
        Ok(Self::from_complex_unchecked(alg, &coords::product(alg, &self.coords(), &other.coords())))
    }

    pub fn lmap(&self) -> DMatrix<C> {
        coords::lmap(self.algebra(), &self.coords())
    }

    pub fn pmap(&self) -> DMatrix<C> {
        let l = self.lmap();
        let sq = self.product(self).expect("same algebra");
        &l * &l * C::new(2.0, 0.0) - sq.lmap()
    }

    /// D(z, w) = L(zw) - [L(z), L(w)].
    pub fn dmap(&self, w: &Self) -> Result<DMatrix<C>> {
        let zw = self.product(w)?;
        let (lz, lw) = (self.lmap(), w.lmap());
        Ok(zw.lmap() - (&lz * &lw - &lw * &lz))
    }

    /// Box operator z [] w = L(zw) + [L(z), L(w)].
    pub fn box_op(&self, w: &Self) -> Result<DMatrix<C>> {
        let zw = self.product(w)?;
        let (lz, lw) = (self.lmap(), w.lmap());
        Ok(zw.lmap() + (&lz * &lw - &lw * &lz))
    }

    /// |z| = ||D(z, z-bar)||^{1/2}, operator norm for the Hermitian coordinate product.
    pub fn spectral_norm(&self) -> f64 {
        let d = self.dmap(&self.conj()).expect("same algebra");
        let sv = d.singular_values();
        sv.iter().fold(0.0, |m: f64, &s| m.max(s)).sqrt()
    }

    /// Complex-bilinear Jordan determinant.
    pub fn det(&self) -> C {
        coords::det(self.algebra(), &self.coords())
    }

    pub fn inverse(&self) -> Result<Self> {
        let alg = self.algebra();
        let d = self.det();
        let scale = self.coord_norm().max(f64::MIN_POSITIVE).powi(alg.rank() as i32);
        if d.norm() <= super::element::SINGULAR_TOL * scale {
            return Err(Error::Singular { det: d.norm() });
        }
        let inv = coords::inverse(alg, &self.coords()).ok_or(Error::Singular { det: d.norm() })?;
        Ok(Self::from_complex_unchecked(alg, &inv))
    }

    /// Random element of the open spectral unit ball with norm in (0, rmax).
    pub fn random_in_ball<R: Rng + ?Sized>(alg: Algebra, rmax: f64, rng: &mut R) -> Self {
        loop {
            let z = Self { re: alg.random_element(rng), im: alg.random_element(rng) };
            let s = z.spectral_norm();
            if s > 1e-6 {
                let target = rng.random_range(0.05..rmax);
                return z.scale(C::new(target / s, 0.0));
            }
        }
    }
}

/// Bergman operator B(z, w) = I - 2 z [] w-bar + P(z) P(w-bar).
pub fn bergman_operator(z: &ComplexElement, w: &ComplexElement) -> Result<DMatrix<C>> {
    z.algebra().check_same(&w.algebra())?;
    let wb = w.conj();
    let n = z.algebra().dim();
    let id = DMatrix::<C>::identity(n, n);
    Ok(id - z.box_op(&wb)? * C::new(2.0, 0.0) + z.pmap() * wb.pmap())
}

/// Canonical polynomial h(z, w): holomorphic in z, antiholomorphic in w,
/// h(z, 0) = 1 and det B(z, w) = h(z, w)^{2 n_V / r}.
pub fn canonical_poly(z: &ComplexElement, w: &ComplexElement) -> Result<C> {
    let alg = z.algebra();
    alg.check_same(&w.algebra())?;
    match alg.kind() {
        Kind::Sym | Kind::Herm => {
            let mz = z.to_matrix()?;
            let mw = w.to_matrix()?;
            let n = alg.n();
            Ok((DMatrix::<C>::identity(n, n) - mz * mw.adjoint()).determinant())
        }
        Kind::Spin => {
            let zc = z.coords();
            let wb = w.conj().coords();
            let dot: C = zc.iter().zip(&wb).map(|(a, b)| a * b).sum();
            let dz = z.det();
            let dw = w.conj().det();
            Ok(C::new(1.0, 0.0) - dot * 2.0 + dz * dw)
        }
    }
}

/// Relative error |det B - h^{2n/r}| / |h^{2n/r}|.
pub fn det_b_residual(z: &ComplexElement, w: &ComplexElement) -> Result<f64> {
    let b = bergman_operator(z, w)?;
    let lhs = b.determinant();
    let h = canonical_poly(z, w)?;
    let rhs = h.powu(z.algebra().bergman_exponent());
    Ok((lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE))
}

/// Cayley transform p(z) = (z - i e)(z + i e)^{-1} from the tube to the
/// unit ball. `tol` is used for the closed-cone test on Im z and for the
/// boundary flag.
pub fn cayley(z: &ComplexElement, tol: f64) -> Result<Cayley> {
    let alg = z.algebra();
    if !z.im.is_in_closed_cone(tol) {
        return Err(Error::OutsideTube);
    }
    let ie = ComplexElement::scalar(alg, C::i());
    let plus = z.add(&ie)?;
    let minus = z.sub(&ie)?;
    let inv = plus.inverse()?;
    let value = minus.product(&inv)?;
    let spectral_norm = value.spectral_norm();
    Ok(Cayley { boundary: spectral_norm >= 1.0 - tol, value, spectral_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn spectral_norm_examples() {
        for a in Algebra::catalogue() {
            let e = ComplexElement::real(a.unit());
            assert!((e.spectral_norm() - 1.0).abs() < 1e-13, "{a}");
        }
        let line = Algebra::line();
        let z = ComplexElement::from_coords(line, &[C::new(0.3, -0.4)]).unwrap();
        assert!((z.spectral_norm() - 0.5).abs() < 1e-15);
        let h2 = Algebra::herm(2).unwrap();
        let z = ComplexElement::real(Element::diagonal(h2, &[0.5, 0.2]).unwrap());
        assert!((z.spectral_norm() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_is_largest_singular_value() {
        let mut rng = seeded(3);
        for a in [Algebra::sym(3).unwrap(), Algebra::herm(3).unwrap(), Algebra::sym(2).unwrap()] {
            for _ in 0..10 {
                let z = ComplexElement { re: a.random_element(&mut rng), im: a.random_element(&mut rng) };
                let m = z.to_matrix().unwrap();
                let smax = m.singular_values().max();
                assert!((z.spectral_norm() - smax).abs() < 1e-12 * smax, "{a}");
            }
        }
        assert_eq!(ComplexElement::zero(Algebra::spin(4).unwrap()).spectral_norm(), 0.0);
    }

    #[test]
    fn canonical_poly_examples() {
        let line = Algebra::line();
        let z = C::new(0.2, 0.3);
        let w = C::new(-0.1, 0.5);
        let h = canonical_poly(
            &ComplexElement::from_coords(line, &[z]).unwrap(),
            &ComplexElement::from_coords(line, &[w]).unwrap(),
        )
        .unwrap();
        assert!((h - (1.0 - z * w.conj())).norm() < 1e-15);

        let h2 = Algebra::herm(2).unwrap();
        let (z1, z2, w1, w2) = (C::new(0.1, 0.2), C::new(-0.3, 0.1), C::new(0.4, -0.2), C::new(0.0, 0.6));
        let zd = DMatrix::from_row_slice(2, 2, &[z1, C::new(0.0, 0.0), C::new(0.0, 0.0), z2]);
        let wd = DMatrix::from_row_slice(2, 2, &[w1, C::new(0.0, 0.0), C::new(0.0, 0.0), w2]);
        let h = canonical_poly(
            &ComplexElement::from_matrix(h2, &zd).unwrap(),
            &ComplexElement::from_matrix(h2, &wd).unwrap(),
        )
        .unwrap();
        let want = (1.0 - z1 * w1.conj()) * (1.0 - z2 * w2.conj());
        assert!((h - want).norm() < 1e-15);

        let mut rng = seeded(4);
        for a in Algebra::catalogue() {
            let z = ComplexElement::random_in_ball(a, 0.9, &mut rng);
            let h = canonical_poly(&z, &ComplexElement::zero(a)).unwrap();
            assert!((h - 1.0).norm() < 1e-14, "{a}");
        }
    }

    #[test]
    fn det_b_matches_canonical_power() {
        let mut rng = seeded(5);
        for a in Algebra::catalogue() {
            for _ in 0..5 {
                let z = ComplexElement::random_in_ball(a, 0.95, &mut rng);
                let w = ComplexElement::random_in_ball(a, 0.95, &mut rng);
                let r = det_b_residual(&z, &w).unwrap();
                assert!(r < 1e-9, "{a}: {r}");
            }
        }
    }

    #[test]
    fn bergman_operator_matrix_model() {
        // B(z, w) y = (I - z w*) y (I - w* z) on matrix kinds
        let mut rng = seeded(6);
        for a in [Algebra::sym(3).unwrap(), Algebra::herm(2).unwrap()] {
            let z = ComplexElement::random_in_ball(a, 0.9, &mut rng);
            let w = ComplexElement::random_in_ball(a, 0.9, &mut rng);
            let y = ComplexElement { re: a.random_element(&mut rng), im: a.random_element(&mut rng) };
            let b = bergman_operator(&z, &w).unwrap();
            let got = &b * nalgebra::DVector::from_vec(y.coords());
            let (mz, mw, my) = (z.to_matrix().unwrap(), w.to_matrix().unwrap(), y.to_matrix().unwrap());
            let n = a.n();
            let id = DMatrix::<C>::identity(n, n);
            let want = (&id - &mz * mw.adjoint()) * my * (&id - mw.adjoint() * &mz);
            let want = ComplexElement::from_matrix(a, &want).unwrap().coords();
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn cayley_examples() {
        let line = Algebra::line();
        let i = ComplexElement::from_coords(line, &[C::i()]).unwrap();
        let c = cayley(&i, 1e-12).unwrap();
        assert!(c.value.coord_norm() < 1e-15 && !c.boundary);
        let zero = ComplexElement::zero(line);
        let c = cayley(&zero, 1e-12).unwrap();
        assert!((c.value.coords()[0] + 1.0).norm() < 1e-15 && c.boundary);
        let s2 = Algebra::sym(2).unwrap();
        let ie = ComplexElement::scalar(s2, C::i());
        let c = cayley(&ie, 1e-12).unwrap();
        assert!(c.value.coord_norm() < 1e-15);
        let below = ComplexElement::from_coords(line, &[C::new(0.0, -1.0)]).unwrap();
        assert!(matches!(cayley(&below, 1e-12), Err(Error::OutsideTube)));
    }

    #[test]
    fn cayley_maps_tube_into_ball() {
        let mut rng = seeded(8);
        for a in Algebra::catalogue() {
            for _ in 0..5 {
                let x = a.random_element(&mut rng);
                let y0 = a.random_element(&mut rng);
                let y = y0.square().add(&a.unit().scale(0.1)).unwrap();
                let z = ComplexElement::new(x, y).unwrap();
                let c = cayley(&z, 1e-12).unwrap();
                assert!(c.spectral_norm < 1.0 && !c.boundary, "{a}: {}", c.spectral_norm);
            }
        }
    }
}
