use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument z = 0 is not allowed here")]
    ZeroArgument,

    #[error("parameters outside the domain: {0}")]
    Domain(String),

    #[error("|ph z| = {phase:.4} exceeds the sector limit {limit:.4}")]
    SectorViolation { phase: f64, limit: f64 },

    #[error("too close to the turning point: |1+z^2| = {distance:.3e}")]
    TurningPoint { distance: f64 },

    #[error("series length exhausted: at least {required} terms needed")]
    SeriesExhausted { required: usize },

    #[error("series did not converge within {0} terms")]
    NonConvergence(usize),

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
