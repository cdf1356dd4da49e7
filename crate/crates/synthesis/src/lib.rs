//! Return words ω⁰/ω¹ for β < φ and certified partition tables of O.

pub mod constants;
pub mod error;
pub mod omega;
pub mod table;

pub use constants::{compute_constants, constants_from_table, SynthesisConstants};
pub use error::{Result, SynthesisError};
pub use omega::{synthesize_omega, synthesize_omega_exact, zero_heavy_exact, Direction, HARD_CAP};
pub use table::{
    build_partition_table, build_partition_table_with_cap, Boundary, DirectionTable, PartitionTable,
    DEFAULT_CELL_CAP,
};
