//! δ(β), δ′(β), n₁(β), n₂(β) and n(β).

use std::cmp::Ordering;

use betafibre_expansion::{Alphabet, ExactBase};
use betafibre_numerics::{BetaValue, Elem, RInterval};
use num_rational::BigRational;

use crate::error::{Result, SynthesisError};
use crate::table::{build_partition_table, PartitionTable};

#[derive(Clone, Debug)]
pub struct SynthesisConstants {
    pub delta: RInterval,
    pub delta_prime: RInterval,
    pub n1: u32,
    pub n2: i32,
    /// Longest word in the certified table.
    pub n: usize,
}

impl SynthesisConstants {
    /// Half-width of the frequency window: c = 1/(2n).
    pub fn c(&self) -> BigRational {
        BigRational::new(1.into(), (2 * self.n as i64).into())
    }

    /// Length bound n₁ + 2n₂ − 1 for words that never enter 𝓘 after the first T₁.
    /// A nonpositive n₂ counts as 1: then at most one (T₁, T₀) block precedes the stop.
    pub fn case_one_bound(&self) -> u32 {
        self.n1 + 2 * self.n2.max(1) as u32 - 1
    }
}

pub(crate) struct ExactConstants {
    pub delta: Elem,
    pub delta_prime: Elem,
    pub n1: u32,
    pub n2: i32,
}

pub(crate) fn exact_constants(base: &ExactBase) -> Result<ExactConstants> {
    let f = &base.field;
    let b = f.gen();
    let (l, r) = (&base.o_lo, &base.o_hi);
    let inv_b = f.inv(&b)?;
    // δ = R − 1/β − (1/(2β))(1/β + L)
    let half = BigRational::new(1.into(), 2.into());
    let t = f.mul_rational(&f.mul(&inv_b, &f.add(&inv_b, l)), &half);
    let delta = f.normalize(&f.sub(&f.sub(r, &inv_b), &t));
    // δ′ = R − (β³ + β² − β⁴)/(β² − 1)
    let b2 = f.mul(&b, &b);
    let b3 = f.mul(&b2, &b);
    let b4 = f.mul(&b3, &b);
    let num = f.sub(&f.add(&b3, &b2), &b4);
    let delta_prime = f.normalize(&f.sub(r, &f.div(&num, &f.add_int(&b2, -1))?));
    if f.sign(&delta)? <= 0 || f.sign(&delta_prime)? <= 0 {
        return Err(SynthesisError::Domain("δ(β) or δ′(β) is not positive".into()));
    }
    // n₁: least n with β^n·g > L, g = T₁(left end of 𝓘).
    let g = f.normalize(&f.apply(&base.ci_lo, 1));
    if f.sign(&g)? <= 0 {
        return Err(SynthesisError::Domain("T₁ of the left end of 𝓘 is not positive".into()));
    }
    let mut n1 = 0u32;
    let mut v = g;
    while f.cmp(&v, l)? != Ordering::Greater {
        v = f.normalize(&f.mul(&v, &b));
        n1 += 1;
    }
    // n₂: the integer with β^{2(n₂−1)}δ ≤ R − L < β^{2n₂}δ. It is ≤ 0 when δ > R − L.
    let width = f.sub(r, l);
    let ib2 = f.inv(&b2)?;
    let mut n2 = 0i32;
    let mut v = delta.clone();
    if f.cmp(&width, &v)? == Ordering::Less {
        loop {
            let below = f.normalize(&f.mul(&v, &ib2));
            if f.cmp(&below, &width)? != Ordering::Greater {
                break;
            }
            v = below;
            n2 -= 1;
        }
    } else {
        while f.cmp(&width, &v)? != Ordering::Less {
            v = f.normalize(&f.mul(&v, &b2));
            n2 += 1;
        }
    }
    Ok(ExactConstants { delta, delta_prime, n1, n2 })
}

pub fn compute_constants(beta: &BetaValue) -> Result<SynthesisConstants> {
    let table = build_partition_table(beta, Alphabet::ZeroOne)?;
    constants_from_table(&table)
}

pub fn constants_from_table(table: &PartitionTable) -> Result<SynthesisConstants> {
    let base = ExactBase::with_field(table.base.field.clone(), Alphabet::ZeroOne)?;
    let e = exact_constants(&base)?;
    let f = &base.field;
    Ok(SynthesisConstants {
        delta: f.enclose(&e.delta, 128)?,
        delta_prime: f.enclose(&e.delta_prime, 128)?,
        n1: e.n1,
        n2: e.n2,
        n: table.n_beta,
    })
}
