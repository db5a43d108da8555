//! Circle model of SL(2,R): the representations pi^+-_mu on even functions
//! on the circle, the intertwiner A_mu and its scalar c(mu), the covariant
//! symbol product and the H-invariant vector xi_k.
//!
//! Singular kernels are only integrated where they converge: A_mu for real
//! mu < -1, symbol kernels for -1 < mu < 0. Everything else goes through the
//! Gamma-quotient eigenvalues.

pub mod checks;
pub mod circle;
pub mod intertwiner;
pub mod symbol;
pub mod xi;

pub use checks::{run_cmu, xi_checks, CmuConfig, CmuSummary, SharpConfig, SharpSummary};
pub use circle::{pi_minus, pi_plus, project, projective_action, representation_matrix, CircleFunction, GroupElement, Projection};
pub use intertwiner::{a_mu_apply, a_mu_eigenvalue, c_mu, d_s, intertwining_residual, EigenPath};
pub use symbol::{
    cross_ratio, hs_norm_singular, op_from_symbol, sharp_integral_formula, sharp_product, symbol_from_kernel,
    FinitePartRule, KernelOperator, Symbol,
};
pub use xi::{xi, xi_invariance_check};
