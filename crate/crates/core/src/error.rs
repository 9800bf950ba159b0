// Copyright 2026 The superlaser Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

use crate::ode::OdeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("mixing angle undefined for zero drive on resonance")]
    DegenerateDressedBasis,

    #[error("Hilbert space dimension {dim} exceeds budget {cap}")]
    DimensionBudget { dim: usize, cap: usize },

    #[error("integration failed: {0}")]
    Integration(#[from] OdeError),

    #[error("non-finite derivative in moment `{moment}` at t = {t}")]
    NonFiniteMoment { moment: String, t: f64 },

    #[error(
        "density matrix lost positivity at t = {t} (min eigenvalue {min_eigenvalue:e}); \
         raise the Fock cutoff"
    )]
    Positivity { t: f64, min_eigenvalue: f64 },

    #[error("spectrum: {0}")]
    Spectrum(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
