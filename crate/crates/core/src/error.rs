// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("candidate shell of radius {radius} nm holds {found} occupied sites, need {wanted}")]
    InsufficientSites {
        radius: f64,
        found: usize,
        wanted: usize,
    },

    #[error("{n} spins exceed the dense-simulation limit of {max}")]
    DimensionOverflow { n: usize, max: usize },

    #[error("matrix is not Hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("density matrix has eigenvalue {0:.3e} below the positivity tolerance")]
    NotPositive(f64),

    #[error("belief is uniform (|p_1| = 0); {0} is undefined")]
    UniformBelief(&'static str),

    #[error("Fourier shift 2^{k} exceeds the coefficient budget J_max = {j_max}")]
    ShiftBudget { k: u32, j_max: usize },

    #[error("posterior normalization vanished")]
    DegenerateNormalization,

    #[error("signal does not decay within the sampled grid (last envelope value {0:.3}); extend the grid")]
    NonDecaying(f64),

    #[error("fit needs at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("hyperfine span {span:.3e} Hz exceeds the unambiguous range 1/(2 tau0) = {limit:.3e} Hz")]
    Aliasing { span: f64, limit: f64 },

    #[error("unsupported format version {found} in {path}, expected {expected}")]
    FormatVersion {
        path: PathBuf,
        found: String,
        expected: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
