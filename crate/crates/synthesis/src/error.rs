use betafibre_expansion::ExpansionError;
use betafibre_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("boundary undecidable: {0}")]
    BoundaryUndecidable(String),
    #[error("subdivision exceeded {cap} cells")]
    SubdivisionOverflow { cap: usize },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl SynthesisError {
    pub fn is_undecidable(&self) -> bool {
        match self {
            SynthesisError::BoundaryUndecidable(_) => true,
            SynthesisError::Expansion(e) => e.is_undecidable(),
            SynthesisError::Numerics(NumericsError::BoundaryUndecidable(_)) => true,
            SynthesisError::Numerics(NumericsError::RefinementStall { .. }) => true,
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, SynthesisError>;
