use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrequencyError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("boundary undecidable: {0}")]
    BoundaryUndecidable(String),
    #[error("schedule error: {0}")]
    Schedule(String),
    #[error("growth violation at n = {n}: increment {increment} is not below {bound}")]
    GrowthViolation { n: u64, increment: String, bound: String },
    #[error("orbit hits the marked point {which} of level {level}")]
    PreimageOfMarkedPoint { level: u32, which: &'static str },
    #[error("certificate violated: {0}")]
    CertificateViolation(String),
    #[error(transparent)]
    Synthesis(#[from] betafibre_synthesis::SynthesisError),
    #[error(transparent)]
    ThueMorse(#[from] betafibre_thuemorse::ThueMorseError),
    #[error(transparent)]
    Expansion(#[from] betafibre_expansion::ExpansionError),
    #[error(transparent)]
    Numerics(#[from] betafibre_numerics::NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FrequencyError {
    pub fn is_undecidable(&self) -> bool {
        match self {
            FrequencyError::BoundaryUndecidable(_) => true,
            FrequencyError::Synthesis(e) => e.is_undecidable(),
            FrequencyError::ThueMorse(e) => e.is_undecidable(),
            FrequencyError::Expansion(e) => e.is_undecidable(),
            FrequencyError::Numerics(
                betafibre_numerics::NumericsError::BoundaryUndecidable(_)
                | betafibre_numerics::NumericsError::RefinementStall { .. },
            ) => true,
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, FrequencyError>;
