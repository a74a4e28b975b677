//! File formats and batch orchestration around `widematch-core`: TOML
//! scenarios, Touchstone v1 IO, CSV/JSON result bundles and SVG plots.

pub mod bundle;
pub mod plot;
pub mod scenario;
pub mod touchstone;

use std::path::Path;

pub use bundle::{Job, Overrides};
pub use scenario::ScenarioFile;
pub use touchstone::{TouchstoneData, TouchstoneError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Touchstone(#[from] TouchstoneError),

    #[error(transparent)]
    Core(#[from] widematch_core::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{path}: {message}")]
    Data { path: String, message: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Error::Io { path: path.display().to_string(), message: e.to_string() }
    }

    /// Prefixes the error with a file or scenario name.
    pub fn context(self, what: impl std::fmt::Display) -> Self {
        Error::Context { context: what.to_string(), source: Box::new(self) }
    }

    pub fn in_file(self, path: &Path) -> Self {
        self.context(path.display())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
