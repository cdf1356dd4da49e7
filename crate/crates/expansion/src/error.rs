use betafibre_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("comparison undecidable at the precision cap: {0}")]
    BoundaryUndecidable(String),
    #[error("mixed alphabets: {0}")]
    MixedAlphabet(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl ExpansionError {
    pub fn is_undecidable(&self) -> bool {
        matches!(
            self,
            ExpansionError::BoundaryUndecidable(_)
                | ExpansionError::Numerics(NumericsError::BoundaryUndecidable(_))
                | ExpansionError::Numerics(NumericsError::RefinementStall { .. })
        )
    }
}

pub type Result<T> = std::result::Result<T, ExpansionError>;
