use super::qseries::{int, QSeries};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

fn rising(x: &BigRational, n: u32) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, k| acc * (x + int(k as i64)))
}

/// Coefficients of F_j: entry l is (-1)^l C(k1+j-1, l) C(k2+j-1, j-l) and
/// multiplies f^{(j-l)} g^{(l)}.
pub fn rcb_coeffs(k1: i64, k2: i64, j: i64) -> Result<Vec<BigRational>> {
    if k1 < 1 || k2 < 1 || j < 0 {
        return Err(Error::InvalidArgument(format!("rcb_coeffs needs k1, k2 >= 1 and j >= 0 (got {k1}, {k2}, {j})")));
    }
    Ok((0..=j)
        .map(|l| {
            let c = binomial(k1 + j - 1, l) * binomial(k2 + j - 1, j - l);
            let c = if l % 2 == 1 { -c } else { c };
            BigRational::from_integer(c)
        })
        .collect())
}

/// Rank-one generalized coefficients: entry n is
/// C(m, n) (-1)^n / ((nu1)_n (nu2)_{m-n}) and multiplies f^{(n)} g^{(m-n)}.
pub fn gen_rcb_scalar_coeffs(nu1: &BigRational, nu2: &BigRational, m: u32) -> Result<Vec<BigRational>> {
    (0..=m)
        .map(|n| {
            let den = rising(nu1, n) * rising(nu2, m - n);
            if den.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "Pochhammer symbol vanishes: ({nu1})_{n} ({nu2})_{}",
                    m - n
                )));
            }
            let c = BigRational::from_integer(binomial(m as i64, n as i64)) / den;
            Ok(if n % 2 == 1 { -c } else { c })
        })
        .collect()
}

/// Floating version for real weights.
pub fn gen_rcb_scalar_coeffs_f64(nu1: f64, nu2: f64, m: u32) -> Result<Vec<f64>> {
    let r = |x: f64, n: u32| (0..n).fold(1.0, |a, k| a * (x + k as f64));
    (0..=m)
        .map(|n| {
            let den = r(nu1, n) * r(nu2, m - n);
            if den == 0.0 {
                return Err(Error::InvalidArgument(format!("Pochhammer symbol vanishes at n = {n}")));
            }
            let c = binomial(m as i64, n as i64).to_f64().unwrap() / den;
            Ok(if n % 2 == 1 { -c } else { c })
        })
        .collect()
}

/// Outcome of comparing the generalized coefficients with the classical ones.
#[derive(Debug, Clone)]
pub struct RatioTest {
    /// gen_n / rcb_{j-n}, aligned by which function carries n derivatives.
    pub ratios: Vec<BigRational>,
    pub constant: bool,
    /// (-1)^j j! / ((k1)_j (k2)_j)
    pub expected: BigRational,
    pub matches_expected: bool,
}

pub fn ratio_test(k1: i64, k2: i64, j: u32) -> Result<RatioTest> {
    let classical = rcb_coeffs(k1, k2, j as i64)?;
    let general = gen_rcb_scalar_coeffs(&int(k1), &int(k2), j)?;
    let ratios: Vec<BigRational> = (0..=j as usize).map(|n| &general[n] / &classical[j as usize - n]).collect();
    let constant = ratios.windows(2).all(|w| w[0] == w[1]);
    let fact = (1..=j as i64).fold(BigInt::one(), |a, k| a * k);
    let mut expected = BigRational::from_integer(fact) / (rising(&int(k1), j) * rising(&int(k2), j));
    if j % 2 == 1 {
        expected = -expected;
    }
    let matches_expected = constant && ratios[0] == expected;
    Ok(RatioTest { ratios, constant, expected, matches_expected })
}

/// F_j(f, g) on q-series with D = q d/dq; weight k1 + k2 + 2j.
pub fn rcb_qseries(f: &QSeries, g: &QSeries, j: u32) -> Result<QSeries> {
    let (k1, k2) = (f.weight(), g.weight());
    let c = rcb_coeffs(k1, k2, j as i64)?;
    let order = f.order().min(g.order());
    let df: Vec<QSeries> = (0..=j as usize).map(|i| f.derivative_n(i)).collect();
    let dg: Vec<QSeries> = (0..=j as usize).map(|i| g.derivative_n(i)).collect();
    let mut acc = QSeries::zero(k1 + k2 + 2 * j as i64, order);
    for (l, cl) in c.iter().enumerate() {
        if cl.is_zero() {
            continue;
        }
        let term = df[j as usize - l].mul(&dg[l]).scale(cl).with_weight(acc.weight());
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// F_j evaluated from derivative values f^{(0..=j)}(z), g^{(0..=j)}(z).
/// Also returns the sum of term magnitudes as a rounding scale.
pub fn rcb_from_derivatives(df: &[Complex64], dg: &[Complex64], k1: i64, k2: i64, j: u32) -> Result<(Complex64, f64)> {
    let c = rcb_coeffs(k1, k2, j as i64)?;
    let j = j as usize;
    if df.len() <= j || dg.len() <= j {
        return Err(Error::InvalidArgument("not enough derivatives".into()));
    }
    let mut v = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (l, cl) in c.iter().enumerate() {
        let t = df[j - l] * dg[l] * cl.to_f64().unwrap();
        scale += t.norm();
        v += t;
    }
    Ok((v, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcb::qseries::{delta_qexp, eisenstein_qexp};
    use proptest::prelude::*;

    fn ints(v: &[BigRational]) -> Vec<i64> {
        v.iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect()
    }

    #[test]
    fn classical_coefficients() {
        assert_eq!(ints(&rcb_coeffs(4, 6, 0).unwrap()), vec![1]);
        assert_eq!(ints(&rcb_coeffs(4, 6, 1).unwrap()), vec![6, -4]);
        assert_eq!(ints(&rcb_coeffs(3, 7, 1).unwrap()), vec![7, -3]);
        assert!(rcb_coeffs(0, 6, 1).is_err());
        assert!(rcb_coeffs(4, 6, -1).is_err());
    }

    #[test]
    fn generalized_coefficients() {
        let g = gen_rcb_scalar_coeffs(&int(4), &int(6), 1).unwrap();
        assert_eq!(g, vec![int(1) / int(6), int(-1) / int(4)]);
        assert_eq!(gen_rcb_scalar_coeffs(&int(4), &int(6), 0).unwrap(), vec![int(1)]);
        assert!(gen_rcb_scalar_coeffs(&int(0), &int(6), 1).is_err());
        let f = gen_rcb_scalar_coeffs_f64(4.0, 6.0, 1).unwrap();
        assert_eq!(f, vec![1.0 / 6.0, -0.25]);
    }

    #[test]
    fn ratio_example() {
        let r = ratio_test(4, 6, 1).unwrap();
        assert!(r.constant && r.matches_expected);
        assert_eq!(r.expected, int(-1) / int(24));
    }

    #[test]
    fn ratio_constancy_grid() {
        for j in 1..=6 {
            for k1 in 2..=10 {
                for k2 in 2..=10 {
                    let r = ratio_test(k1, k2, j).unwrap();
                    assert!(r.constant && r.matches_expected, "j={j} k1={k1} k2={k2}");
                }
            }
        }
    }

    #[test]
    fn bracket_of_eisenstein_series() {
        let e4 = eisenstein_qexp(4, 50).unwrap();
        let e6 = eisenstein_qexp(6, 50).unwrap();
        let f1 = rcb_qseries(&e4, &e6, 1).unwrap();
        assert_eq!(f1.weight(), 12);
        assert_eq!(f1, delta_qexp(50).scale(&int(3456)));
        assert_eq!(f1.coeff(1), &int(3456));
        assert_eq!(f1.coeff(2), &int(-82944));
        let f0 = rcb_qseries(&e4, &e6, 0).unwrap();
        assert_eq!(f0, e4.mul(&e6));
    }

    #[test]
    fn odd_brackets_of_equal_forms_vanish() {
        let e4 = eisenstein_qexp(4, 20).unwrap();
        for j in [1, 3, 5, 7, 9] {
            assert!(rcb_qseries(&e4, &e4, j).unwrap().is_zero(), "j={j}");
        }
        assert!(!rcb_qseries(&e4, &e4, 2).unwrap().is_zero());
    }

    proptest! {
        #[test]
        fn coefficient_symmetry(k in 1i64..12, j in 0i64..10) {
            let c = rcb_coeffs(k, k, j).unwrap();
            for l in 0..=j as usize {
                let s = if j % 2 == 0 { c[j as usize - l].clone() } else { -c[j as usize - l].clone() };
                prop_assert_eq!(&c[l], &s);
            }
        }

        #[test]
        fn weight_bookkeeping(j in 0u32..5, a in 0usize..2, b in 0usize..2) {
            let forms = [eisenstein_qexp(4, 6).unwrap(), eisenstein_qexp(6, 6).unwrap()];
            let f = rcb_qseries(&forms[a], &forms[b], j).unwrap();
            prop_assert_eq!(f.weight(), forms[a].weight() + forms[b].weight() + 2 * j as i64);
        }
    }
}
