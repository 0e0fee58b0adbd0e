use globres::cones::ConeError;
use globres::multiseries::SeriesError;
use globres::transform::TransformError;
use globres::{BasisError, LinalgError, PolyError};
use thiserror::Error;

use crate::system_file::SystemFileError;

/// Failures, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Basis(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Basis(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "parse",
            CliError::Basis(_) => "basis",
            CliError::Invariant(_) => "invariant",
        }
    }
}

impl From<SystemFileError> for CliError {
    fn from(e: SystemFileError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<BasisError> for CliError {
    fn from(e: BasisError) -> Self {
        CliError::Basis(e.to_string())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::NotInterior(_) | ConeError::NotATerm(..) => CliError::Input(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::CofactorMismatch { .. } => CliError::Invariant(e.to_string()),
            TransformError::WeightLength { .. } => CliError::Input(e.to_string()),
            _ => CliError::Basis(e.to_string()),
        }
    }
}
