//! Exact evaluation and bulk sieving of multiplicative functions.

mod exponent;
mod factor;
mod functions;
mod sieve;
mod theta;

pub use exponent::ExponentVector;
pub use factor::{factorize, FactoredInteger};
pub use functions::{
    dedekind_psi, divisors, euler_phi, jordan_quotient, jordan_totient, jordan_totient_by_mobius,
    mobius,
};
pub use sieve::{sieve_spf, sieve_spf_with_ceiling, SpfTable, DEFAULT_SIEVE_CEILING};
pub use theta::{
    phi_theta, sieve_kernel_function, sieve_phi_theta, sieve_phi_theta_f64, theta_from_exponents,
    GrowthCertificate, ThetaRule, ThetaSpec,
};
