//! Coordinate kernels shared by real and complexified elements.
//!
//! Everything here is complex-linear in the coordinates, so the real algebra
//! is the special case of vanishing imaginary parts.

use super::{Algebra, Kind};
use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use std::f64::consts::SQRT_2;

const ZERO: C = C::new(0.0, 0.0);

/// Coordinates to an n x n complex matrix (complex-linear extension).
pub(crate) fn to_matrix(alg: Algebra, c: &[C]) -> DMatrix<C> {
    let n = alg.n();
    let mut m = DMatrix::from_element(n, n, ZERO);
    match alg.kind() {
        Kind::Sym => {
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    if i == j {
                        m[(i, i)] = c[k];
                    } else {
                        let v = c[k] / SQRT_2;
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                    k += 1;
                }
            }
        }
        Kind::Herm => {
            for i in 0..n {
                m[(i, i)] = c[i];
            }
            let mut k = n;
            let i_unit = C::i();
            for i in 0..n {
                for j in i + 1..n {
                    let a = c[k] / SQRT_2;
                    let b = c[k + 1] / SQRT_2;
                    m[(i, j)] = a + i_unit * b;
                    m[(j, i)] = a - i_unit * b;
                    k += 2;
                }
            }
        }
        Kind::Spin => unreachable!("spin factor has no matrix model"),
    }
    m
}

/// Inverse of [`to_matrix`]: coordinate k is tr(E_k M).
pub(crate) fn from_matrix(alg: Algebra, m: &DMatrix<C>) -> Vec<C> {
    let n = alg.n();
    let mut c = Vec::with_capacity(alg.dim());
    match alg.kind() {
        Kind::Sym => {
            for i in 0..n {
                for j in i..n {
                    if i == j {
                        c.push(m[(i, i)]);
                    } else {
                        c.push((m[(i, j)] + m[(j, i)]) / SQRT_2);
                    }
                }
            }
        }
        Kind::Herm => {
            for i in 0..n {
                c.push(m[(i, i)]);
            }
            let i_unit = C::i();
            for i in 0..n {
                for j in i + 1..n {
                    c.push((m[(i, j)] + m[(j, i)]) / SQRT_2);
                    c.push(i_unit * (m[(j, i)] - m[(i, j)]) / SQRT_2);
                }
            }
        }
        Kind::Spin => unreachable!("spin factor has no matrix model"),
    }
    c
}

/// Complex-bilinear Jordan product.
pub(crate) fn product(alg: Algebra, x: &[C], y: &[C]) -> Vec<C> {
    match alg.kind() {
        Kind::Sym | Kind::Herm => {
            let a = to_matrix(alg, x);
            let b = to_matrix(alg, y);
            let p = (&a * &b + &b * &a) * C::new(0.5, 0.0);
            from_matrix(alg, &p)
        }
        Kind::Spin => {
            let n = alg.n();
            let (xn, yn) = (x[n - 1], y[n - 1]);
            let mut out = Vec::with_capacity(n);
            let mut dot = xn * yn;
            for i in 0..n - 1 {
                out.push(xn * y[i] + yn * x[i]);
                dot += x[i] * y[i];
            }
            out.push(dot);
            out
        }
    }
}

/// Matrix of L(x): column j is x o e_j.
pub(crate) fn lmap(alg: Algebra, x: &[C]) -> DMatrix<C> {
    let dim = alg.dim();
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    let mut e = vec![ZERO; dim];
    for j in 0..dim {
        e[j] = C::new(1.0, 0.0);
        let col = product(alg, x, &e);
        for (i, v) in col.into_iter().enumerate() {
            m[(i, j)] = v;
        }
        e[j] = ZERO;
    }
    m
}

/// Complex-bilinear Jordan determinant (top characteristic coefficient).
pub(crate) fn det(alg: Algebra, x: &[C]) -> C {
    match alg.kind() {
        Kind::Sym | Kind::Herm => to_matrix(alg, x).determinant(),
        Kind::Spin => {
            let n = alg.n();
            let mut d = x[n - 1] * x[n - 1];
            for v in &x[..n - 1] {
                d -= v * v;
            }
            d
        }
    }
}

/// Complex-bilinear Jordan inverse, or None when the determinant vanishes.
pub(crate) fn inverse(alg: Algebra, x: &[C]) -> Option<Vec<C>> {
    match alg.kind() {
        Kind::Sym | Kind::Herm => to_matrix(alg, x).try_inverse().map(|m| from_matrix(alg, &m)),
        Kind::Spin => {
            let d = det(alg, x);
            if d == ZERO {
                return None;
            }
            let n = alg.n();
            let mut out: Vec<C> = x[..n - 1].iter().map(|v| -v / d).collect();
            out.push(x[n - 1] / d);
            Some(out)
        }
    }
}

pub(crate) fn to_complex(x: &[f64]) -> Vec<C> {
    x.iter().map(|&v| C::new(v, 0.0)).collect()
}
