//! Exact and high-precision arithmetic for Jordan totient quotients.
//!
//! The crate is organised bottom-up:
//!
//! * [`multiplicative`]: smallest-prime-factor sieves, factorizations, the
//!   Jordan totients `J_k`, Jordan quotients `J_e` and general theta-totients.
//! * [`combinatorics`]: Bernoulli numbers, signed Stirling numbers of the
//!   first kind and weighted partitions `λ_1 + 2λ_2 + … + kλ_k = k`.
//! * [`cyclotomic`]: exact cyclotomic polynomials together with the closed
//!   forms for their derivatives at `1` and `-1` and the Schwarzian at `1`.
//! * [`constants`]: Euler-product mean-value constants, evaluated either as a
//!   truncated product or through a prime-zeta accelerated log expansion.
//! * [`lab`]: summatory functions, main-term subtraction and log-power fits
//!   used to check mean-value asymptotics numerically.
//!
//! Exact values are [`ExactRational`]s; conversion to floating point only
//! happens at explicit API boundaries.

pub mod combinatorics;
pub mod constants;
pub mod cyclotomic;
mod error;
pub mod lab;
pub mod multiplicative;

pub use error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type ExactRational = rug::Rational;

pub use combinatorics::{bernoulli_numbers, stirling_first_signed, weighted_partitions, WeightedPartition};

pub use cyclotomic::CyclotomicPoly;
pub use constants::{ConstantValue, Method, PrecisionContext};
pub use multiplicative::{ExponentVector, FactoredInteger, SpfTable, ThetaSpec};
