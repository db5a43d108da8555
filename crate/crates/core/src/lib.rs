//! Computational toolkit for Euclidean Jordan algebras, conical special
//! functions, Rankin-Cohen brackets, rank-one weighted Bergman spaces and the
//! SL(2,R) circle-model covariant symbolic calculus.
//!
//! Numerical hot loops (quadrature sweeps, matrix assembly, randomized trials)
//! run through [`exec::Exec`], which uses rayon when the `parallel` feature is
//! enabled and falls back to a plain sequential loop otherwise. Reductions are
//! always performed in a fixed order, so results do not depend on the policy.

pub mod bergman;
pub mod error;
pub mod exec;
pub mod gamma;
pub mod jordan;
pub mod quadrature;
pub mod rcb;
pub mod report;
pub mod rng;
pub mod sharp;
pub mod special;

pub use error::{Error, Result};
pub use exec::Exec;
