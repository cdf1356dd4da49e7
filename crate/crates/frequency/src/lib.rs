//! Expansion generators with prescribed digit statistics: fixed frequency, accumulation sets,
//! simply normal expansions above the golden ratio, hybrid and slow-growth ±1 expansions.

pub mod error;
pub mod generators;
pub mod normal;
pub mod stream;
pub mod target;

pub use error::{FrequencyError, Result};
pub use generators::{
    accumulation_expansion, accumulation_expansion_with_table, frequency_expansion, frequency_expansion_with_table,
    frequency_window, hybrid_expansion, hybrid_expansion_with_table, slow_growth_constant, slow_growth_expansion,
    slow_growth_expansion_with_table,
};
pub use normal::{
    normal_constants, run_length_bound, simply_normal_expansion, simply_normal_expansion_elem, MarkedPolicy,
    NormalConstants,
};
pub use stream::{digit_char, Checkpoint, ExpansionStream, GeneratorKind};
pub use target::{window, FrequencyTarget, GrowthFunction, Schedule, ScheduleIter};
