//! Parameter sweeps and certificate runs behind the `cdw-ring` binary.
//!
//! A [`SweepSpec`] is assembled from a configuration file and command-line
//! overrides, [`run`] evaluates it, and the result is rendered as CSV or JSON
//! at a fixed precision.

pub mod emit;
pub mod run;
pub mod settings;
pub mod spec;

use std::path::PathBuf;

use thiserror::Error;

pub use run::{run, RunOutput, CERTIFICATE_BOUND};
pub use settings::Settings;
pub use spec::{
    load_config, BaseSpec, Format, Grid, OutputSpec, ProfileSource, SweepKind, SweepSpec,
    WindingPolicy,
};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] crate::Error),
}

impl SweepError {
    /// Exit status: 2 for bad input, 3 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Io { .. } | SweepError::Model(crate::Error::Io { .. }) => 3,
            SweepError::Usage(_) | SweepError::Model(_) => 2,
        }
    }
}
