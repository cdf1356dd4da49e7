//! The self-affine attractors Λ_{β₁,β₂,β₃} generated by
//! S₋₁(x, y) = ((x − 1)/β₁, (y − 1)/β₂) and S₁(x, y) = ((x + 1)/β₁, (y + 1)/β₃):
//! certified intervals in vertical fibres, the contraction radius δ that guarantees them,
//! the Hare–Sidorov condition, and rendering.

pub mod delta;
pub mod error;
pub mod fibre;
pub mod hs;
pub mod params;
pub mod render;

pub use delta::{
    certify_delta, certify_delta_with_table, check_system, monotone_extreme_check, monotone_extreme_check_capped,
    periodic_value_f64, word_string, BiPoly, CheckKind, DeltaCertificate, DeltaSearch, PairCheck, Sign, Verdict,
    MAX_BOXES,
};
pub use error::{AffineError, Result};
pub use fibre::{
    fibre_interval, fibre_precision, point_in_fibre, point_in_fibre_rational, FibreCertificate, ENDPOINT_DIGITS,
};
pub use hs::{hare_sidorov, hare_sidorov_value, HsVerdict};
pub use params::AffineParams;
pub use render::{render_attractor, write_csv, Raster, RenderMode, MAX_DEPTH};
