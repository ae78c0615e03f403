//! Experiment runner for the multipath delayed-choice simulator: sweep
//! configuration, CSV/JSON/SVG artifacts, mesh files and the acceptance
//! suite. The numerics live in `duality-core`.

#![forbid(unsafe_code)]

pub mod acceptance;
pub mod config;
pub mod io;
pub mod plot;
pub mod scenario;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] duality_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
