//! Digits, the maps T₋₁, T₀, T₁, the canonical intervals and projections.

pub mod error;
mod fixed;
pub mod intervals;
pub mod ops;
pub mod word;

pub use error::{ExpansionError, Result};
pub use intervals::{CanonicalIntervals, ExactBase};
pub use ops::{
    apply_map, map_into_o, map_into_o_exact, orbit, project, project_affine, project_affine_iv, OrbitTracker,
    Projection,
};
pub use word::{Alphabet, Digit, DigitWord, MapWord};
