// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors produced by segmentation, cross-validation and inference routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An index or interval fell outside the series.
    #[error("range error: {0}")]
    Range(String),
    /// Two inputs disagree on length or dimension.
    #[error("shape error: {0}")]
    Shape(String),
    /// A requested number of change-points cannot be produced.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// An invalid configuration value.
    #[error("configuration error: {0}")]
    Config(String),
    /// Input data violates a type invariant (non-finite values, too short, ...).
    #[error("invalid data: {0}")]
    Data(String),
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Self::Range(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Self::Shape(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Self::Capacity(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Self::Data(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
