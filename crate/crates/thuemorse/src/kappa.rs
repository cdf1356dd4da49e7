//! The fixed-point and flip relations of κⁿ on the periodic Thue–Morse points.

use betafibre_numerics::{BetaValue, RInterval};

use crate::error::Result;
use crate::ladder::{apply_iv, periodic_value_iv};
use crate::words::{kappa, kappa_bar, thue_morse};

/// Left side, right side, and whether their difference encloses 0.
#[derive(Clone, Debug)]
pub struct Relation {
    pub lhs: RInterval,
    pub rhs: RInterval,
    pub holds: bool,
}

impl Relation {
    fn new(lhs: RInterval, rhs: RInterval) -> Relation {
        let holds = lhs.sub(&rhs).contains_zero() && lhs.width_f64() < 1e-20;
        Relation { lhs, rhs, holds }
    }
}

#[derive(Clone, Debug)]
pub struct KappaReport {
    pub n: u32,
    /// κⁿ(π((τⁿ)^∞)) = π((τⁿ)^∞)
    pub fix: Relation,
    /// κ̄ⁿ(π((τ̄ⁿ)^∞)) = π((τ̄ⁿ)^∞)
    pub fix_bar: Relation,
    /// κⁿ(π((τⁿ⁺¹)^∞)) = π((τ̄ⁿ⁺¹)^∞)
    pub flip: Relation,
    /// κ̄ⁿ(π((τ̄ⁿ⁺¹)^∞)) = π((τⁿ⁺¹)^∞)
    pub flip_bar: Relation,
}

impl KappaReport {
    pub fn all_hold(&self) -> bool {
        self.fix.holds && self.fix_bar.holds && self.flip.holds && self.flip_bar.holds
    }
}

pub fn kappa_identities_check(n: u32, beta: &BetaValue) -> Result<KappaReport> {
    // κⁿ expands by β^{2ⁿ}; carry enough bits to absorb it.
    let prec = 192 + (1u32 << n);
    let b = beta.enclose_bits(prec)?.with_prec(prec);
    let tn = thue_morse(n);
    let tn1 = thue_morse(n + 1);
    let a_n = periodic_value_iv(&b, &tn.bits);
    let b_n = periodic_value_iv(&b, &tn.complement());
    let a_n1 = periodic_value_iv(&b, &tn1.bits);
    let b_n1 = periodic_value_iv(&b, &tn1.complement());
    let k = kappa(n);
    let kb = kappa_bar(n);
    Ok(KappaReport {
        n,
        fix: Relation::new(apply_iv(&b, &k, &a_n), a_n.clone()),
        fix_bar: Relation::new(apply_iv(&b, &kb, &b_n), b_n.clone()),
        flip: Relation::new(apply_iv(&b, &k, &a_n1), b_n1.clone()),
        flip_bar: Relation::new(apply_iv(&b, &kb, &b_n1), a_n1),
    })
}
