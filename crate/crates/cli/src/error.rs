use thiserror::Error;

/// Failure classes, one per exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("undecidable at working precision: {0}")]
    Undecidable(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Undecidable(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn classify(undecidable: bool, io: bool, msg: String) -> CliError {
        if undecidable {
            CliError::Undecidable(msg)
        } else if io {
            CliError::Io(msg)
        } else {
            CliError::Domain(msg)
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Io(e.to_string())
    }
}

impl From<betafibre_numerics::NumericsError> for CliError {
    fn from(e: betafibre_numerics::NumericsError) -> CliError {
        use betafibre_numerics::NumericsError::*;
        let u = matches!(e, BoundaryUndecidable(_) | RefinementStall { .. });
        CliError::classify(u, false, e.to_string())
    }
}

macro_rules! classified {
    ($($t:ty => $io:expr),* $(,)?) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> CliError {
                let io: fn(&$t) -> bool = $io;
                CliError::classify(e.is_undecidable(), io(&e), e.to_string())
            }
        }
    )*};
}

classified! {
    betafibre_expansion::ExpansionError => |_| false,
    betafibre_synthesis::SynthesisError => |_| false,
    betafibre_thuemorse::ThueMorseError => |_| false,
    betafibre_frequency::FrequencyError => |e| matches!(e, betafibre_frequency::FrequencyError::Io(_)),
    betafibre_affine::AffineError => |e| matches!(e, betafibre_affine::AffineError::Io(_)),
}
