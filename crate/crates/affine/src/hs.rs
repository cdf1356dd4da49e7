//! The Hare–Sidorov sufficient condition for an interior point when β₂ = β₃.

use std::cmp::Ordering;

use betafibre_numerics::{compare_beta, BetaValue, RInterval, PREC_CAP};

use crate::error::{AffineError, Result};
use crate::params::enclose;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsVerdict {
    Satisfied,
    Violated,
}

impl HsVerdict {
    pub fn name(self) -> &'static str {
        match self {
            HsVerdict::Satisfied => "satisfied",
            HsVerdict::Violated => "violated",
        }
    }
}

/// |(β₂⁸ − β₁⁸)/(β₂⁷ − β₁⁷)| + |β₂⁷β₁⁷(β₂ − β₁)/(β₂⁷ − β₁⁷)| on enclosures.
pub fn hare_sidorov_value(b1: &RInterval, b2: &RInterval) -> RInterval {
    let d7 = b2.powi(7).sub(&b1.powi(7));
    let first = b2.powi(8).sub(&b1.powi(8)).div(&d7).abs();
    let second = b2.powi(7).mul(&b1.powi(7)).mul(&b2.sub(b1)).div(&d7).abs();
    first.add(&second)
}

/// Whether the left side is at most 2, refined until certified.
pub fn hare_sidorov(beta1: &BetaValue, beta2: &BetaValue) -> Result<(HsVerdict, RInterval)> {
    if compare_beta(beta1, beta2)? == Ordering::Equal {
        return Err(AffineError::EqualBases);
    }
    let two = RInterval::from_int(2, 64);
    let mut prec = 64u32;
    loop {
        let v = hare_sidorov_value(&enclose(beta1, prec)?, &enclose(beta2, prec)?);
        if v.is_finite() {
            if v.hi() <= two.lo() {
                return Ok((HsVerdict::Satisfied, v));
            }
            if v.lo() > two.hi() {
                return Ok((HsVerdict::Violated, v));
            }
        }
        if prec >= PREC_CAP {
            return Err(AffineError::BoundaryUndecidable("Hare–Sidorov value at 2".into()));
        }
        prec *= 2;
    }
}
