use betafibre_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AffineError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("boundary undecidable: {0}")]
    BoundaryUndecidable(String),
    #[error("no delta certificate covers {0}")]
    NoDeltaCertificate(String),
    #[error("no positive delta could be certified for {0}")]
    NoPositiveDelta(String),
    #[error("box subdivision exceeded {0} boxes")]
    BoxSubdivisionOverflow(usize),
    #[error("the condition needs distinct bases")]
    EqualBases,
    #[error(transparent)]
    Synthesis(#[from] betafibre_synthesis::SynthesisError),
    #[error(transparent)]
    Expansion(#[from] betafibre_expansion::ExpansionError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl AffineError {
    pub fn is_undecidable(&self) -> bool {
        match self {
            AffineError::BoundaryUndecidable(_) => true,
            AffineError::Synthesis(e) => e.is_undecidable(),
            AffineError::Expansion(e) => e.is_undecidable(),
            AffineError::Numerics(NumericsError::BoundaryUndecidable(_) | NumericsError::RefinementStall { .. }) => {
                true
            }
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, AffineError>;
