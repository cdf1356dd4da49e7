//! The parameter triple and the two contractions S₋₁, S₁.

use betafibre_numerics::{BetaValue, RInterval};

use crate::error::{AffineError, Result};

const PARAM_PREC: u32 = 256;

/// Bases (β₁, β₂, β₃), each in (1, 2]. β₁ contracts horizontally; β₂ and β₃ contract
/// vertically after a −1 and a +1 digit respectively.
#[derive(Clone, Debug)]
pub struct AffineParams {
    pub beta1: BetaValue,
    pub beta2: BetaValue,
    pub beta3: BetaValue,
}

impl AffineParams {
    /// `BetaValue` already enforces (1, 2].
    pub fn new(beta1: BetaValue, beta2: BetaValue, beta3: BetaValue) -> AffineParams {
        AffineParams { beta1, beta2, beta3 }
    }

    pub fn parse(b1: &str, b2: &str, b3: &str) -> Result<AffineParams> {
        Ok(AffineParams::new(BetaValue::parse(b1)?, BetaValue::parse(b2)?, BetaValue::parse(b3)?))
    }

    /// Enclosures of β₂ and β₃.
    pub fn vertical(&self, prec: u32) -> Result<(RInterval, RInterval)> {
        Ok((enclose(&self.beta2, prec)?, enclose(&self.beta3, prec)?))
    }

    pub fn to_f64(&self) -> (f64, f64, f64) {
        (self.beta1.to_f64(), self.beta2.to_f64(), self.beta3.to_f64())
    }

    /// S_ε(x, y) = ((x + ε)/β₁, (y + ε)/β_ε) with β₋₁ = β₂ and β₁ = β₃, in f64.
    pub fn apply_f64(&self, eps: i8, (x, y): (f64, f64)) -> (f64, f64) {
        let (b1, b2, b3) = self.to_f64();
        let e = eps as f64;
        let bv = if eps == 1 { b3 } else { b2 };
        ((x + e) / b1, (y + e) / bv)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "beta1": self.beta1.spec(),
            "beta2": self.beta2.spec(),
            "beta3": self.beta3.spec(),
        })
    }
}

pub(crate) fn enclose(b: &BetaValue, prec: u32) -> Result<RInterval> {
    let e = match b.enclose_bits(prec) {
        Ok(e) => e,
        Err(_) => b.enclosure(),
    };
    if !e.is_finite() {
        return Err(AffineError::Domain(format!("base {b} has no finite enclosure")));
    }
    Ok(e.with_prec(prec.max(PARAM_PREC)))
}
