use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("refinement stalled at the {bits}-bit precision cap")]
    RefinementStall { bits: u32 },
    #[error("comparison undecidable at the precision cap: {0}")]
    BoundaryUndecidable(String),
    #[error("{0} has no exact algebraic definition")]
    NotAlgebraic(String),
}

pub type Result<T> = std::result::Result<T, NumericsError>;
