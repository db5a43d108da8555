use super::Element;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Real symmetric n x n matrices.
    Sym,
    /// Complex Hermitian n x n matrices.
    Herm,
    /// Spin factor R^{n-1} x R.
    Spin,
}

/// A registered Euclidean Jordan algebra.
///
/// Coordinates are orthonormal for the inner product tr(xy) on matrix kinds
/// and for the Euclidean product on the spin factor:
///
/// * `sym:n`  upper triangle row by row, off-diagonal entries scaled by sqrt 2;
/// * `herm:n` the n diagonal entries, then for each i < j the pair
///   (sqrt 2 Re x_ij, sqrt 2 Im x_ij);
/// * `spin:n` (x'_1, ..., x'_{n-1}, x_n), unit (0, ..., 0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Descriptor", into = "Descriptor")]
pub struct Algebra {
    kind: Kind,
    n: usize,
}

/// Wire form `{"kind": "sym", "n": 3}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Descriptor {
    pub kind: String,
    pub n: usize,
}

impl TryFrom<Descriptor> for Algebra {
    type Error = Error;
    fn try_from(d: Descriptor) -> Result<Self> {
        Algebra::from_name(&d.kind, d.n)
    }
}

impl From<Algebra> for Descriptor {
    fn from(a: Algebra) -> Self {
        Descriptor { kind: a.kind_name().to_string(), n: a.n }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind_name(), self.n)
    }
}

impl std::str::FromStr for Algebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, n) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidDescriptor(format!("`{s}` (expected kind:n, e.g. sym:3)")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidDescriptor(format!("`{s}`: size is not a positive integer")))?;
        Algebra::from_name(name.trim(), n)
    }
}

impl Algebra {
    pub fn new(kind: Kind, n: usize) -> Result<Self> {
        match kind {
            Kind::Sym | Kind::Herm if n == 0 => {
                Err(Error::InvalidDescriptor(format!("{kind:?} needs n >= 1")))
            }
            Kind::Spin if n < 3 => Err(Error::InvalidDescriptor(format!("spin factor needs n >= 3, got {n}"))),
            _ => Ok(Self { kind, n }),
        }
    }

    pub fn from_name(name: &str, n: usize) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "sym" | "symreal" => Self::new(Kind::Sym, n),
            "herm" | "hermcomplex" => Self::new(Kind::Herm, n),
            "spin" | "spinfactor" => Self::new(Kind::Spin, n),
            _ => Err(Error::UnsupportedKind(name.to_string())),
        }
    }

    pub fn sym(n: usize) -> Result<Self> {
        Self::new(Kind::Sym, n)
    }

    pub fn herm(n: usize) -> Result<Self> {
        Self::new(Kind::Herm, n)
    }

    pub fn spin(n: usize) -> Result<Self> {
        Self::new(Kind::Spin, n)
    }

    /// The rank-one algebra R = Sym(1).
    pub fn line() -> Self {
        Self { kind: Kind::Sym, n: 1 }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Sym => "sym",
            Kind::Herm => "herm",
            Kind::Spin => "spin",
        }
    }

    /// The size parameter n of the descriptor.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            Kind::Sym | Kind::Herm => self.n,
            Kind::Spin => 2,
        }
    }

    /// Real dimension n_V.
    pub fn dim(&self) -> usize {
        match self.kind {
            Kind::Sym => self.n * (self.n + 1) / 2,
            Kind::Herm => self.n * self.n,
            Kind::Spin => self.n,
        }
    }

    /// Peirce multiplicity d.
    pub fn peirce(&self) -> usize {
        match self.kind {
            Kind::Sym => 1,
            Kind::Herm => 2,
            Kind::Spin => self.n - 2,
        }
    }

    pub fn d(&self) -> f64 {
        self.peirce() as f64
    }

    /// n_V / r as a float.
    pub fn dim_over_rank(&self) -> f64 {
        self.dim() as f64 / self.rank() as f64
    }

    /// 2 n_V / r, an integer for every registered kind.
    pub fn bergman_exponent(&self) -> u32 {
        (2 * self.dim() / self.rank()) as u32
    }

    /// n_V = r + (d/2) r (r-1), checked in integers.
    pub fn peirce_identity_holds(&self) -> bool {
        let (r, d) = (self.rank(), self.peirce());
        2 * self.dim() == 2 * r + d * r * (r - 1)
    }

    pub fn is_matrix_kind(&self) -> bool {
        matches!(self.kind, Kind::Sym | Kind::Herm)
    }

    pub fn check_same(&self, other: &Algebra) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch { left: self.to_string(), right: other.to_string() })
        }
    }

    pub fn zero(&self) -> Element {
        Element::from_coords_unchecked(*self, vec![0.0; self.dim()])
    }

    pub fn unit(&self) -> Element {
        let mut c = vec![0.0; self.dim()];
        match self.kind {
            Kind::Sym => {
                let mut k = 0;
                for i in 0..self.n {
                    c[k] = 1.0;
                    k += self.n - i;
                }
            }
            Kind::Herm => c[..self.n].iter_mut().for_each(|x| *x = 1.0),
            Kind::Spin => c[self.n - 1] = 1.0,
        }
        Element::from_coords_unchecked(*self, c)
    }

    /// The coordinate basis.
    pub fn basis(&self) -> Vec<Element> {
        (0..self.dim())
            .map(|j| {
                let mut c = vec![0.0; self.dim()];
                c[j] = 1.0;
                Element::from_coords_unchecked(*self, c)
            })
            .collect()
    }

    /// Element with i.i.d. uniform(-1, 1) coordinates.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let c = (0..self.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        Element::from_coords_unchecked(*self, c)
    }

    /// The algebras used by the structural checks: Sym(2..5), Herm(2..4), Spin(3..8).
    pub fn catalogue() -> Vec<Algebra> {
        let mut v = Vec::new();
        v.extend((2..=5).map(|n| Algebra { kind: Kind::Sym, n }));
        v.extend((2..=4).map(|n| Algebra { kind: Kind::Herm, n }));
        v.extend((3..=8).map(|n| Algebra { kind: Kind::Spin, n }));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_constants() {
        let s = Algebra::sym(3).unwrap();
        assert_eq!((s.rank(), s.dim(), s.peirce()), (3, 6, 1));
        let h = Algebra::herm(2).unwrap();
        assert_eq!((h.rank(), h.dim(), h.peirce()), (2, 4, 2));
        let p = Algebra::spin(5).unwrap();
        assert_eq!((p.rank(), p.dim(), p.peirce()), (2, 5, 3));
        assert_eq!(s.bergman_exponent(), 4);
        assert_eq!(h.bergman_exponent(), 4);
        assert_eq!(p.bergman_exponent(), 5);
    }

    #[test]
    fn peirce_identity_on_catalogue() {
        for a in Algebra::catalogue() {
            assert!(a.peirce_identity_holds(), "{a}");
        }
        assert!(Algebra::line().peirce_identity_holds());
    }

    #[test]
    fn parsing() {
        assert_eq!("sym:3".parse::<Algebra>().unwrap(), Algebra::sym(3).unwrap());
        assert_eq!("herm:2".parse::<Algebra>().unwrap(), Algebra::herm(2).unwrap());
        assert!(matches!("quat:2".parse::<Algebra>(), Err(Error::UnsupportedKind(_))));
        assert!(matches!("oct:3".parse::<Algebra>(), Err(Error::UnsupportedKind(_))));
        assert!(matches!("spin:2".parse::<Algebra>(), Err(Error::InvalidDescriptor(_))));
        assert!(matches!("sym".parse::<Algebra>(), Err(Error::InvalidDescriptor(_))));
    }

    #[test]
    fn json_round_trip() {
        let a = Algebra::spin(4).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"kind":"spin","n":4}"#);
        let b: Algebra = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<Algebra>(r#"{"kind":"oct","n":3}"#).is_err());
    }

    #[test]
    fn unit_coordinates() {
        assert_eq!(Algebra::sym(2).unwrap().unit().coords(), &[1.0, 0.0, 1.0]);
        assert_eq!(Algebra::herm(2).unwrap().unit().coords(), &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(Algebra::spin(3).unwrap().unit().coords(), &[0.0, 0.0, 1.0]);
    }
}
