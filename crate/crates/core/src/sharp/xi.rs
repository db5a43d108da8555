//! The H-invariant vector xi_k(z) = (-conj z)^{-k/2} for H = diagonal matrices.

use crate::{Error, Result};
use num_complex::Complex64;

type C = Complex64;

fn check_weight(k: i64) -> Result<()> {
    if k % 2 != 0 {
        Err(Error::OddWeight(k))
    } else {
        Ok(())
    }
}

/// xi_k(z) for even k; integer power, so no branch is involved.
pub fn xi(k: i64, z: C) -> Result<C> {
    check_weight(k)?;
    if !(z.im > 0.0) {
        return Err(Error::OutsideTube);
    }
    Ok((-z.conj()).powi(-(k / 2) as i32))
}

/// |a^k xi_k(a^2 z) - xi_k(z)| / |xi_k(z)| for h = diag(a, 1/a).
pub fn xi_invariance_check(k: i64, a: f64, z: C) -> Result<f64> {
    check_weight(k)?;
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("diag(a, 1/a) needs finite a != 0, got {a}")));
    }
    let base = xi(k, z)?;
    let moved = xi(k, z * (a * a))? * a.powi(k as i32);
    Ok((moved - base).norm() / base.norm())
}
