// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not hermitian (max |M - M^dag| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("operator is not a projector (max |P^2 - P| = {defect:e})")]
    NotProjector { defect: f64 },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("truncation leakage: top Fock level population {population:e} exceeds {limit:e}")]
    TruncationLeakage { population: f64, limit: f64 },

    #[error("{what} = {value} outside allowed range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: String,
    },

    #[error("zero-norm state: {0}")]
    ZeroNorm(String),

    #[error("non-physical density operator: {0}")]
    NonPhysical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("speed limit is unbounded: zero energy variance between distinct states")]
    Unbounded,
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, value: f64, range: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value,
            range: range.into(),
        }
    }

    /// True for failures of a numerical guard (as opposed to bad input).
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::TruncationLeakage { .. } | Error::NotHermitian { .. } | Error::NonPhysical(_)
        )
    }
}
