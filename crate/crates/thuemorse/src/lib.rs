//! Thue–Morse words, quasi-greedy expansions, the rungs β_m below β_KL, and multinacci bases.

pub mod dim;
pub mod error;
pub mod kappa;
pub mod ladder;
pub mod quasi;
pub mod words;

pub use dim::{above_multinacci, dim_lower_bound, multinacci, multinacci_poly, w_words, DimBound};
pub use error::{Result, ThueMorseError};
pub use kappa::{kappa_identities_check, KappaReport, Relation};
pub use ladder::{
    apply_iv, base_ladder, certify_switches, komornik_loreti, ladder_rung, locate_rung, marked_points,
    periodic_value, periodic_value_iv, rung_poly, BaseLadder, MarkedPoints, SwitchCertificate, DEFAULT_RUNGS,
};
pub use quasi::{lex_cmp, lex_window_prefix, quasi_greedy, satisfies_lexbound};
pub use words::{kappa, kappa_bar, tau, thue_morse, upsilon_period, ThueMorseWord};
