//! Harness errors and their process exit codes.

use thiserror::Error;

use crate::generators::GeneratorError;
use crate::harmonic::HarmonicError;
use crate::hyperbolic::HyperbolicError;
use crate::packing::PackingError;
use crate::percolation::PercolationError;
use crate::tiling::TilingError;
use crate::triangulation::TriangulationError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Percolation(#[from] PercolationError),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
}

impl HarnessError {
    /// 2 for invalid input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Harmonic(
                HarmonicError::NonConvergence { .. } | HarmonicError::Disconnected { .. },
            )
            | HarnessError::Tiling(TilingError::Solver(_) | TilingError::ZeroCurrent)
            | HarnessError::Packing(PackingError::Budget { .. } | PackingError::Layout(_))
            | HarnessError::Hyperbolic(HyperbolicError::AllExcluded) => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}
