use betafibre_expansion::ExpansionError;
use betafibre_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThueMorseError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("boundary undecidable: {0}")]
    BoundaryUndecidable(String),
    #[error("ladder exhausted: β is not below rung {rungs}")]
    LadderExhausted { rungs: usize },
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl ThueMorseError {
    pub fn is_undecidable(&self) -> bool {
        match self {
            ThueMorseError::BoundaryUndecidable(_) => true,
            ThueMorseError::Expansion(e) => e.is_undecidable(),
            ThueMorseError::Numerics(NumericsError::BoundaryUndecidable(_))
            | ThueMorseError::Numerics(NumericsError::RefinementStall { .. }) => true,
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, ThueMorseError>;
