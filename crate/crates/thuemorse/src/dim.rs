//! Multinacci bases and the dimension lower bound for points without a simply normal expansion.

use betafibre_numerics::{BetaValue, Field, IntPoly, RInterval};
use num_bigint::BigInt;

use crate::error::{Result, ThueMorseError};
use crate::ladder::root_in_unit_to_two;

/// x^{n+1} − xⁿ − … − x − 1.
pub fn multinacci_poly(n: u32) -> IntPoly {
    let mut c = vec![BigInt::from(-1); n as usize + 2];
    c[n as usize + 1] = 1.into();
    IntPoly::new(c)
}

/// The root in (1, 2) of x^{n+1} = xⁿ + … + x + 1.
pub fn multinacci(n: u32) -> Result<BetaValue> {
    if n == 0 {
        return Err(ThueMorseError::Domain("multinacci index starts at 1".into()));
    }
    root_in_unit_to_two(&multinacci_poly(n))
}

/// β strictly above the n-th multinacci number: the polynomial is negative on (1, root)
/// and positive after it, so this is a sign test at β.
pub fn above_multinacci(beta: &BetaValue, n: u32) -> Result<bool> {
    let p = multinacci_poly(n);
    if beta.is_algebraic() {
        let f = Field::new(beta)?;
        let b = f.gen();
        let mut v = f.zero();
        for c in p.coeffs().iter().rev() {
            v = f.add(&f.mul(&v, &b), &f.from_bigint(c.clone()));
        }
        return Ok(f.sign(&f.normalize(&v))? > 0);
    }
    let mut prec = 128 + 2 * n;
    loop {
        let b = beta.enclose_bits(prec)?.with_prec(prec);
        let v = p.eval_interval(&b);
        if v.is_positive() {
            return Ok(true);
        }
        if v.is_negative() {
            return Ok(false);
        }
        if prec > 8192 {
            return Err(ThueMorseError::BoundaryUndecidable("β is too close to the multinacci root".into()));
        }
        prec *= 2;
    }
}

/// W_n: words of length n with more 1s than 0s, other than 1ⁿ.
pub fn w_words(n: u32) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for m in 0u64..(1u64 << n) {
        let ones = m.count_ones();
        if 2 * ones > n && ones < n {
            out.push((0..n).rev().map(|i| ((m >> i) & 1) as u8).collect());
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct DimBound {
    pub k: u32,
    /// #W_{2k+1} = 2^{2k} − 1.
    pub count: BigInt,
    /// log(2^{2k} − 1) / ((2k + 1) log β).
    pub value: RInterval,
}

/// Dimension of π_β(W_{2k+1}^ℕ), valid for β above the 2(2k+1)-th multinacci number and up to 2.
pub fn dim_lower_bound(k: u32, beta: &BetaValue) -> Result<DimBound> {
    if k == 0 {
        return Err(ThueMorseError::Domain("k must be at least 1".into()));
    }
    if !above_multinacci(beta, 2 * (2 * k + 1))? {
        return Err(ThueMorseError::Domain(format!(
            "β must exceed the multinacci number of index {}",
            2 * (2 * k + 1)
        )));
    }
    let prec = 128;
    let count: BigInt = (BigInt::from(1) << (2 * k)) - 1;
    let num = RInterval::from_int(count.clone(), prec).ln()?;
    let den = beta.enclose_bits(prec)?.with_prec(prec).ln()?.mul_int(2 * k as i64 + 1);
    Ok(DimBound { k, count, value: num.div(&den) })
}
