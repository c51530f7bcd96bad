//! Number types shared by every evaluator: overflow-free scaled complex
//! values, a configurable-precision complex type, and gamma utilities.

pub mod big;
pub mod gamma;
pub mod scaled;

pub use big::{BigComplex, BigCtx, DEFAULT_DIGITS};
pub use gamma::{
    factorial_over_gamma, gamma_real, gamma_shifted, gamma_star_polys, gamma_star_series, GammaStarCoeffs,
};
pub use scaled::ScaledComplex;
