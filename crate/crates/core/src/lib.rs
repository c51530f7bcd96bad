pub mod bessel_type_expansion;
pub mod bessel_uniform;
pub mod cli_harness;
pub mod elementary_expansion;
pub mod error;
pub mod exact_core;
pub mod rational_poly;
pub mod scaled_arith;
pub mod series;
pub mod simple_expansion;

pub use error::{Error, Result};
