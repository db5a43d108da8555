use super::qseries::{eisenstein_qexp, QSeries};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A monomial E4^a E6^b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
}

impl Monomial {
    pub fn weight(&self) -> i64 {
        4 * self.a as i64 + 6 * self.b as i64
    }

    /// "E4^3", "E6^2", "E4*E6", "1".
    pub fn name(&self) -> String {
        let part = |s: &str, e: u32| match e {
            0 => None,
            1 => Some(s.to_string()),
            _ => Some(format!("{s}^{e}")),
        };
        let parts: Vec<String> = [part("E4", self.a), part("E6", self.b)].into_iter().flatten().collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn series(&self, order: usize) -> QSeries {
        let e4 = eisenstein_qexp(4, order).expect("weight 4");
        let e6 = eisenstein_qexp(6, order).expect("weight 6");
        e4.pow(self.a).mul(&e6.pow(self.b))
    }
}

/// All monomials of weight k, ordered by decreasing power of E4.
pub fn monomials(weight: i64) -> Vec<Monomial> {
    if weight < 0 || weight % 2 != 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut b = 0;
    while 6 * b <= weight {
        let rest = weight - 6 * b;
        if rest % 4 == 0 {
            out.push(Monomial { a: (rest / 4) as u32, b: b as u32 });
        }
        b += 1;
    }
    out
}

/// Exact coordinates of a series in the monomial basis of its weight.
#[derive(Debug, Clone)]
pub struct ModularExpansion {
    pub weight: i64,
    pub coords: Vec<(Monomial, BigRational)>,
    /// The residual F - sum c_m m vanishes through this order.
    pub checked_through: usize,
}

impl ModularExpansion {
    pub fn coord(&self, m: Monomial) -> BigRational {
        self.coords.iter().find(|(k, _)| *k == m).map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }
}

/// Solve F = sum c_m E4^a E6^b exactly over all N + 1 coefficients.
///
/// Fails with [`Error::NotModular`] when the overdetermined system is
/// inconsistent, i.e. F is not a level-one modular form of its weight to
/// the available precision.
pub fn express_in_modular_basis(f: &QSeries) -> Result<ModularExpansion> {
    let weight = f.weight();
    let order = f.order();
    let basis = monomials(weight);
    let cols = basis.len();
    let series: Vec<QSeries> = basis.iter().map(|m| m.series(order)).collect();

    // augmented matrix, rows = q^0..q^N
    let mut rows: Vec<Vec<BigRational>> = (0..=order)
        .map(|i| {
            let mut r: Vec<BigRational> = series.iter().map(|s| s.coeff(i).clone()).collect();
            r.push(f.coeff(i).clone());
            r
        })
        .collect();

    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for c in 0..cols {
        let Some(p) = (pivot_row..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = BigRational::one() / &rows[pivot_row][c];
        for v in rows[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != pivot_row && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for k in c..=cols {
                    let t = &rows[pivot_row][k] * &factor;
                    rows[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    // The monomials are linearly independent, so every column has a pivot
    // once N + 1 >= dim; otherwise the system is underdetermined.
    if pivots.len() < cols {
        return Err(Error::InvalidArgument(format!(
            "order {order} too small to separate the {cols} monomials of weight {weight}"
        )));
    }
    let mut coords = Vec::with_capacity(cols);
    for (r, &c) in pivots.iter().enumerate() {
        coords.push((basis[c], rows[r][cols].clone()));
    }

    // explicit residual series, independent of the elimination bookkeeping
    let mut residual = f.clone();
    for (m, c) in &coords {
        let term = m.series(order).scale(c).with_weight(weight);
        residual = residual.sub(&term)?;
    }
    if let Some(first) = residual.valuation() {
        return Err(Error::NotModular { weight, order: first });
    }
    Ok(ModularExpansion { weight, coords, checked_through: order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcb::brackets::rcb_qseries;
    use crate::rcb::qseries::{delta_qexp, int};

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(0), vec![Monomial { a: 0, b: 0 }]);
        assert!(monomials(2).is_empty());
        assert_eq!(monomials(12).len(), 2);
        assert_eq!(monomials(24).len(), 3);
        assert!(monomials(7).is_empty());
        assert_eq!(Monomial { a: 3, b: 0 }.name(), "E4^3");
        assert_eq!(Monomial { a: 1, b: 1 }.name(), "E4*E6");
        assert_eq!(Monomial { a: 0, b: 0 }.name(), "1");
    }

    #[test]
    fn bracket_f1_e4_e6() {
        let e4 = eisenstein_qexp(4, 50).unwrap();
        let e6 = eisenstein_qexp(6, 50).unwrap();
        let f1 = rcb_qseries(&e4, &e6, 1).unwrap();
        let ex = express_in_modular_basis(&f1).unwrap();
        assert_eq!(ex.coord(Monomial { a: 3, b: 0 }), int(2));
        assert_eq!(ex.coord(Monomial { a: 0, b: 2 }), int(-2));
    }

    #[test]
    fn e4_squared() {
        let e4 = eisenstein_qexp(4, 30).unwrap();
        let ex = express_in_modular_basis(&e4.mul(&e4)).unwrap();
        assert_eq!(ex.weight, 8);
        assert_eq!(ex.coords, vec![(Monomial { a: 2, b: 0 }, int(1))]);
    }

    #[test]
    fn f2_e4_e4_closure() {
        let e4 = eisenstein_qexp(4, 50).unwrap();
        let f2 = rcb_qseries(&e4, &e4, 2).unwrap();
        let ex = express_in_modular_basis(&f2).unwrap();
        assert_eq!(ex.weight, 12);
        assert_eq!(ex.checked_through, 50);
    }

    #[test]
    fn non_modular_is_rejected() {
        // D E4 is only quasi-modular
        let e4 = eisenstein_qexp(4, 20).unwrap();
        assert!(matches!(express_in_modular_basis(&e4.derivative()), Err(Error::NotModular { .. })));
        let bad = delta_qexp(20).add(&QSeries::one(20).with_weight(12)).unwrap();
        // 1 + Delta is modular of weight 12 (E4^3 combination); perturb a coefficient
        let mut c = bad.coeffs().to_vec();
        c[7] += int(1);
        assert!(matches!(
            express_in_modular_basis(&QSeries::new(12, c)),
            Err(Error::NotModular { weight: 12, .. })
        ));
    }
}
