use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Truncated power series sum_{n <= N} c_n q^n with exact rational
/// coefficients and an attached weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    weight: i64,
    coeffs: Vec<BigRational>,
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QSeries {
    pub fn new(weight: i64, coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-series needs at least the constant term");
        Self { weight, coeffs }
    }

    pub fn from_integers(weight: i64, coeffs: &[i64]) -> Self {
        Self::new(weight, coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(weight: i64, order: usize) -> Self {
        Self { weight, coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(0, order);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn with_weight(mut self, weight: i64) -> Self {
        self.weight = weight;
        self
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self { weight: self.weight, coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    fn check_weights(&self, other: &Self) -> Result<()> {
        if self.weight != other.weight {
            return Err(Error::InvalidArgument(format!(
                "adding series of weights {} and {}",
                self.weight, other.weight
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_weights(other)?;
        let n = self.order().min(other.order());
        Ok(Self { weight: self.weight, coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_weights(other)?;
        let n = self.order().min(other.order());
        Ok(Self { weight: self.weight, coeffs: (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect() })
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self { weight: self.weight, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Cauchy product truncated at the smaller order; weights add.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { weight: self.weight + other.weight, coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// D = q d/dq, i.e. (1/2 pi i) d/dz; raises the weight by 2.
    pub fn derivative(&self) -> Self {
        Self {
            weight: self.weight + 2,
            coeffs: self.coeffs.iter().enumerate().map(|(n, c)| c * int(n as i64)).collect(),
        }
    }

    pub fn derivative_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |s, _| s.derivative())
    }

    /// Coefficients as decimal strings of reduced fractions.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }
}

/// "p" for integers, "p/q" otherwise.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn divisor_power_sum(n: u64, p: u32) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(p);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(p);
            }
        }
        d += 1;
    }
    s
}

/// Eisenstein series E_4 = 1 + 240 sum sigma_3(n) q^n and E_6 = 1 - 504 sum sigma_5(n) q^n.
pub fn eisenstein_qexp(k: u32, order: usize) -> Result<QSeries> {
    let (c, p) = match k {
        4 => (240, 3),
        6 => (-504, 5),
        _ => return Err(Error::InvalidArgument(format!("Eisenstein series of weight {k} (supported: 4, 6)"))),
    };
    let mut coeffs = vec![BigRational::one()];
    for n in 1..=order as u64 {
        coeffs.push(BigRational::from_integer(divisor_power_sum(n, p) * c));
    }
    Ok(QSeries::new(k as i64, coeffs))
}

/// Delta = q prod (1 - q^n)^24, weight 12.
pub fn delta_qexp(order: usize) -> QSeries {
    // integer arithmetic first, the product is over Z
    let mut prod = vec![BigInt::zero(); order + 1];
    prod[0] = BigInt::one();
    for n in 1..=order {
        for _ in 0..24 {
            for i in (n..=order).rev() {
                let t = prod[i - n].clone();
                prod[i] -= t;
            }
        }
    }
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for i in 1..=order {
        coeffs[i] = BigRational::from_integer(prod[i - 1].clone());
    }
    QSeries::new(12, coeffs)
}

/// Named level-one forms accepted by the CLI.
pub fn named_form(name: &str, order: usize) -> Result<QSeries> {
    match name.to_ascii_uppercase().as_str() {
        "E4" => eisenstein_qexp(4, order),
        "E6" => eisenstein_qexp(6, order),
        "DELTA" | "D" => Ok(delta_qexp(order)),
        _ => Err(Error::InvalidArgument(format!("unknown form `{name}` (E4, E6, Delta)"))),
    }
}
