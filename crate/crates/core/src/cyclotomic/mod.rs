//! Exact cyclotomic polynomials and closed forms for their derivatives.
//!
//! [`CyclotomicPoly`] together with [`derivative_at`] is the brute-force
//! oracle; [`lehmer`] and [`closed_forms`] hold the formulas expressed
//! through Jordan totients.

pub mod closed_forms;
pub mod lehmer;
mod poly;

pub use closed_forms::{schwarzian_at_1, second_derivative_ratio_minus1};
pub use lehmer::{
    lehmer_leading_term, lehmer_power_sum, lehmer_power_sum_even_form, lehmer_ratio, LehmerExpansion,
};
pub use poly::{
    cyclotomic_poly, cyclotomic_poly_cached, derivative_at, normalized_derivative, poly_derivative_at,
    schwarzian_of, CyclotomicPoly, DEFAULT_MAX_DERIVATIVE_ORDER,
};
