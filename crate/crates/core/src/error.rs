// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid truncation {n}: at least {min} Fock levels required")]
    InvalidTruncation { n: usize, min: usize },

    #[error(
        "truncation too small for {what}: |amplitude|^2 = {amplitude_sq:.4} exceeds {limit:.4}; \
         use at least N = {suggested_n}"
    )]
    TruncationInadequate {
        what: &'static str,
        amplitude_sq: f64,
        limit: f64,
        suggested_n: usize,
    },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: Vec<usize>, found: Vec<usize> },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("logical basis is ill-conditioned: |<a|-a>| = {overlap:.4} > 0.99")]
    IllConditionedBasis { overlap: f64 },

    #[error("step size underflow at t = {t:.6e} (h = {step:.3e}); problem too stiff for the explicit integrator")]
    Stiffness { t: f64, step: f64 },

    #[error("trace drifted by {drift:.3e} at t = {t:.6e}")]
    Accuracy { t: f64, drift: f64 },

    #[error("no convergence before t = {t_max:.4e} (residual {residual:.3e})")]
    Convergence { t_max: f64, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Stiffness { .. } | Error::Accuracy { .. } | Error::Convergence { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
