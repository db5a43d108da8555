//! Rankin-Cohen brackets: exact coefficients, brackets of q-expansions,
//! level-one modular bases and covariance under the slash action.

mod brackets;
pub mod checks;
pub mod covariance;
mod modular;
mod qseries;

pub use brackets::{
    binomial, gen_rcb_scalar_coeffs, gen_rcb_scalar_coeffs_f64, ratio_test, rcb_coeffs, rcb_from_derivatives,
    rcb_qseries, RatioTest,
};
pub use checks::RcbConfig;
pub use covariance::{covariance_residual, slash_action, Family, Moebius, TestFunction};
pub use modular::{express_in_modular_basis, monomials, ModularExpansion, Monomial};
pub use qseries::{delta_qexp, eisenstein_qexp, int, named_form, rational_string, QSeries};
