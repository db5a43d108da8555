//! Rank-one weighted Bergman spaces on the upper half-plane: the Laplace
//! transform from the cone, weighted norms on both sides, the reproducing
//! kernel, the pointwise-product estimate and the kernel expansion.
//!
//! Tube integrals use graded geometric panels in both directions with the
//! far tail extrapolated from the last two panels, so no truncation box has
//! to be chosen; a panel sequence that stops decaying is reported as
//! [`crate::Error::Divergent`].

pub mod checks;
pub mod cone;
pub mod tube;

pub use checks::{
    c_nu_expected, calibrate_c_nu, convolution_inequality_check, derivative_shift_check, homomorphism_residual,
    isometry_check, khs_expansion_check, pointwise_product_check, reproducing_check, reproducing_integral,
    reproducing_refinement,
    BergmanConfig, BergmanSummary,
};
pub use cone::{cone_convolution, cone_norm, cone_norm_sq, laplace_transform, ConeFunction};
pub use tube::{cauchy_riemann_residual, tube_norm, tube_norm_sq, PowerProbe, ProbeProduct, QuadratureScheme, TubeFunction};
