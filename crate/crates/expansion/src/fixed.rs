//! Interval shadow of an orbit in i128 fixed point, with outward rounding.

use betafibre_numerics::{Dyadic, RInterval};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Full 256-bit product of two u128 values as (high, low).
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let m = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & m);
    let (b1, b0) = (b >> 64, b & m);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & m) + (p10 & m);
    let lo = (p00 & m) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// floor or ceil of a·b / 2^f for f in 1..128; the caller keeps the result below 2^127.
fn mul_shr(a: u128, b: u128, f: u32, ceil: bool) -> u128 {
    let (hi, lo) = mul_wide(a, b);
    let q = (hi << (128 - f)) | (lo >> f);
    let rem = lo & ((1u128 << f) - 1);
    if ceil && rem != 0 {
        q + 1
    } else {
        q
    }
}

/// β·x rounded down (or up) for signed x.
fn scale(beta: u128, x: i128, f: u32, up: bool) -> i128 {
    let m = mul_shr(beta, x.unsigned_abs(), f, if x >= 0 { up } else { !up }) as i128;
    if x >= 0 {
        m
    } else {
        -m
    }
}

fn dyadic_scaled(d: &Dyadic, f: u32, up: bool) -> Option<i128> {
    let e = d.exp() + f as i64;
    let v = if e >= 0 {
        d.mant() << e as u64
    } else if up {
        -((-d.mant()) >> (-e) as u64)
    } else {
        d.mant() >> (-e) as u64
    };
    v.to_i128()
}

#[derive(Clone, Debug)]
pub(crate) struct FixedShadow {
    f: u32,
    beta_lo: u128,
    beta_hi: u128,
    lo: i128,
    hi: i128,
    limit: i128,
    max_width: i128,
}

impl FixedShadow {
    /// Fraction bits for orbit values bounded by `bound` in absolute value, if i128 has room.
    pub fn fraction_bits(bound: f64) -> Option<u32> {
        let head = (bound + 2.0).log2().ceil() as i64 + 2;
        let f = 126 - head;
        (f >= 96).then_some(f as u32)
    }

    pub fn new(f: u32, beta: &RInterval, x: &RInterval, bound: f64) -> Option<FixedShadow> {
        let beta_lo = dyadic_scaled(beta.lo_fin()?, f, false)?.try_into().ok()?;
        let beta_hi = dyadic_scaled(beta.hi_fin()?, f, true)?.try_into().ok()?;
        let limit = ((bound + 2.0) * 2f64.powi(f as i32)) as i128;
        let mut s = FixedShadow { f, beta_lo, beta_hi, lo: 0, hi: 0, limit, max_width: 1i128 << (f - 64) };
        s.reseed(x).then_some(s)
    }

    pub fn bits(&self) -> u32 {
        self.f
    }

    /// Replace the state by an enclosure; false if it does not fit.
    pub fn reseed(&mut self, x: &RInterval) -> bool {
        match (x.lo_fin().and_then(|d| dyadic_scaled(d, self.f, false)), x.hi_fin().and_then(|d| dyadic_scaled(d, self.f, true))) {
            (Some(lo), Some(hi)) if lo.abs() < self.limit && hi.abs() < self.limit => {
                self.lo = lo;
                self.hi = hi;
                true
            }
            _ => false,
        }
    }

    /// x ↦ βx − d; false once the shadow is too wide or leaves the safe range.
    pub fn apply(&mut self, d: i8) -> bool {
        let lo = scale(if self.lo >= 0 { self.beta_lo } else { self.beta_hi }, self.lo, self.f, false);
        let hi = scale(if self.hi >= 0 { self.beta_hi } else { self.beta_lo }, self.hi, self.f, true);
        let shift = (d as i128) << self.f;
        self.lo = lo - shift;
        self.hi = hi - shift;
        self.lo.abs() < self.limit && self.hi.abs() < self.limit && self.hi - self.lo <= self.max_width
    }

    pub fn to_interval(&self) -> RInterval {
        let e = -(self.f as i64);
        RInterval::from_dyadics(Dyadic::new(BigInt::from(self.lo), e), Dyadic::new(BigInt::from(self.hi), e), self.f + 8)
    }
}
