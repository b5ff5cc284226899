use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the ring model and its solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring configuration: {0}")]
    InvalidConfig(String),

    #[error("amplitude must satisfy |ε| < 1, got {0}")]
    AmplitudeOutOfRange(f64),

    #[error("grid size must be at least {min}, got {got}")]
    GridTooSmall { min: usize, got: usize },

    #[error("harmonic index must be at least 1")]
    ZeroHarmonic,

    #[error("harmonic {harmonic} is not resolved on a grid of {grid_size} points")]
    HarmonicTooHigh { harmonic: usize, grid_size: usize },

    #[error("profile mean {mean:e} is not zero")]
    NonZeroMean { mean: f64 },

    #[error("density vanishes at sample {index}: n0 + n1 = {density}")]
    DensityVanishes { index: usize, density: f64 },

    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),

    #[error("landau quartic coefficient must be positive, got {0}")]
    NonPositiveQuartic(f64),

    #[error(
        "projected descent did not converge after {iterations} iterations \
         (stationarity residual {residual:e}, constraint residual {constraint:e})"
    )]
    NonConvergence {
        iterations: usize,
        residual: f64,
        constraint: f64,
    },

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("{path}:{line}: {message}")]
    ProfileParse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
