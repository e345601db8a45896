// SPDX-License-Identifier: Apache-2.0
use thiserror::Error;

/// Errors produced by the solvers and file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty envelope")]
    EmptyEnvelope,
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid solution: {}", .0.join("; "))]
    InvalidSolution(Vec<String>),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("L4L infeasible: {0}")]
    L4lInfeasible(String),
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
