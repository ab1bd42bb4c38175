use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::sweep::MAX_GRID_POINTS;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot parse {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown example '{0}', expected 4.1 or 4.2")]
    UnknownExample(String),
    #[error("grid has {0} points, above the limit of {MAX_GRID_POINTS}")]
    GridTooLarge(u128),
    #[error("numerical failure: {0}")]
    Numeric(#[from] pielou_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{0} reproduction row(s) failed")]
    ReproductionFailed(usize),
}

impl CliError {
    /// Process exit status: 2 for bad input, 3 for numeric blow-up.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. }
            | CliError::Parse { .. }
            | CliError::Invalid(_)
            | CliError::UnknownExample(_)
            | CliError::GridTooLarge(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Write { .. } | CliError::ReproductionFailed(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
