//! Arbitrary-precision special functions.

pub mod bernoulli;
pub mod gamma;
pub mod hurwitz;

pub use bernoulli::{bernoulli, bernoulli_polynomial, BernoulliTable};
pub use gamma::{digamma, digamma_series, euler_gamma, log_gamma};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_ds, hurwitz_zeta_from, hurwitz_zeta_with_ds, SeriesValue};
