//! Euclidean Jordan algebras Sym(n, R), Herm(n, C) and the spin factors,
//! their symmetric cones and the complexified structure used by the
//! bounded symmetric domain (spectral norm, Bergman operator, canonical
//! polynomial, Cayley transform).

mod algebra;
pub mod checks;
mod complex;
mod coords;
mod element;

pub use algebra::{Algebra, Descriptor, Kind};
pub use complex::{bergman_operator, canonical_poly, cayley, det_b_residual, Cayley, ComplexElement};
pub use element::{Element, SINGULAR_TOL};
