//! Certified numerics: outward-rounded intervals, algebraic bases and exact
//! arithmetic in the number field generated by a base.

pub mod beta;
pub mod dyadic;
pub mod error;
pub mod field;
pub mod interval;
pub mod poly;

pub use beta::{compare_beta, BetaDef, BetaValue};
pub use dyadic::{Dyadic, Round};
pub use error::{NumericsError, Result};
pub use field::{Elem, Field};
pub use interval::{compare, Bound, Cmp3, RInterval, DEFAULT_PREC, PREC_CAP};
pub use poly::{IntPoly, QPoly};
