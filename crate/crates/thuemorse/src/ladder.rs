//! The rungs β_m with α(β_m) = υᵐ, the Komornik–Loreti constant and rung location.

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use betafibre_expansion::MapWord;
use betafibre_numerics::{compare_beta, BetaValue, Dyadic, Elem, Field, IntPoly, RInterval};
use num_bigint::BigInt;

use crate::error::{Result, ThueMorseError};
use crate::words::{tau, thue_morse, upsilon_period};

pub const DEFAULT_RUNGS: usize = 6;

/// x^L − Σ υ_i x^{L−i} − 1 with L = 2ᵐ; β_m is its root in (1, 2).
pub fn rung_poly(m: u32) -> IntPoly {
    let p = upsilon_period(m);
    let l = p.len();
    let mut c = vec![BigInt::from(0); l + 1];
    c[l] = 1.into();
    for (i, &u) in p.iter().enumerate() {
        c[l - 1 - i] -= BigInt::from(u);
    }
    c[0] -= 1;
    IntPoly::new(c)
}

fn f64_root(p: &IntPoly, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_string().parse::<f64>().unwrap()).collect();
    let ev = |x: f64| c.iter().rev().fold(0.0, |a, &k| a * x + k);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ev(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Root of p in (1, 2), where p < 0 left of it and p > 0 right of it.
pub(crate) fn root_in_unit_to_two(p: &IntPoly) -> Result<BetaValue> {
    let (lo, hi) = f64_root(p, 1.0, 2.0);
    let pad = 1e-9;
    let r = |x: f64| Dyadic::from_f64(x).to_rational();
    let lo = r((lo - pad).max(1.0));
    let hi = r((hi + pad).min(2.0));
    Ok(BetaValue::from_poly(p.clone(), lo, hi)?)
}

/// β_m, the m-th rung (β₁ = φ).
pub fn ladder_rung(m: u32) -> Result<BetaValue> {
    if m == 0 {
        return Err(ThueMorseError::Domain("rungs start at m = 1".into()));
    }
    root_in_unit_to_two(&rung_poly(m))
}

#[derive(Clone, Debug)]
pub struct BaseLadder {
    pub rungs: Vec<BetaValue>,
}

pub fn base_ladder(m: usize) -> Result<BaseLadder> {
    Ok(BaseLadder { rungs: (1..=m as u32).map(ladder_rung).collect::<Result<_>>()? })
}

/// 1 − Σ_{i≤N} τ_i β^{-i} minus the tail enclosure, at a point β.
fn kl_defect(b: &RInterval, n: u64) -> Result<RInterval> {
    let r = b.recip();
    let mut s = RInterval::from_int(0, b.prec());
    for i in (1..=n).rev() {
        s = s.add_int(tau(i) as i64).mul(&r);
    }
    let tail = RInterval::geometric_tail(b, n)?;
    let zero = RInterval::from_int(0, b.prec());
    Ok(s.add(&zero.hull(&tail)).add_int(-1))
}

fn kl_refine(bits: u32) -> betafibre_numerics::Result<RInterval> {
    let prec = bits + 48;
    let n = ((bits as f64 + 24.0) / 1.787f64.log2()).ceil() as u64 + 8;
    let mut lo = Dyadic::from_f64(1.787);
    let mut hi = Dyadic::from_f64(1.788);
    let err = |e: ThueMorseError| betafibre_numerics::NumericsError::Domain(e.to_string());
    let target = Dyadic::one().ldexp(-(bits as i64));
    loop {
        let w = hi.sub_exact(&lo);
        if w <= target {
            break;
        }
        let mid = lo.add_exact(&hi).ldexp(-1);
        let v = kl_defect(&RInterval::point(mid.clone(), prec), n).map_err(err)?;
        // The series is decreasing in β: a positive defect means the root lies to the right.
        if v.is_positive() {
            lo = mid;
        } else if v.is_negative() {
            hi = mid;
        } else {
            return Err(betafibre_numerics::NumericsError::RefinementStall { bits });
        }
    }
    Ok(RInterval::from_dyadics(lo, hi, prec))
}

/// β_KL: the root of 1 = Σ_{i≥1} τ_i β^{-i}, as a refinable enclosure.
pub fn komornik_loreti() -> BetaValue {
    static KL: OnceLock<BetaValue> = OnceLock::new();
    KL.get_or_init(|| {
        let b = BetaValue::from_enclosure("komornik-loreti", Arc::new(kl_refine)).expect("KL is in (1,2]");
        b.enclose_bits(48).expect("KL refines");
        b
    })
    .clone()
}

/// π_β(p^∞) = (Σ p_i β^{L−i}) / (β^L − 1), exactly.
pub fn periodic_value(f: &Field, p: &[u8]) -> Result<Elem> {
    let b = f.gen();
    let mut num = f.zero();
    for &d in p {
        num = f.add_int(&f.mul(&num, &b), d as i64);
    }
    let den = f.add_int(&f.pow(&b, p.len() as u32), -1);
    Ok(f.normalize(&f.div(&num, &den)?))
}

/// Values π_β((τⁱ)^∞) and π_β((τ̄ⁱ)^∞) for i = 1..=m+1, exact.
#[derive(Clone, Debug)]
pub struct MarkedPoints {
    pub a: Vec<Elem>,
    pub b: Vec<Elem>,
}

pub fn marked_points(f: &Field, m: u32) -> Result<MarkedPoints> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 1..=m + 1 {
        let w = thue_morse(i);
        a.push(periodic_value(f, &w.bits)?);
        b.push(periodic_value(f, &w.complement())?);
    }
    Ok(MarkedPoints { a, b })
}

#[derive(Clone, Debug)]
pub struct SwitchCertificate {
    pub m: u32,
    pub a: Vec<RInterval>,
    pub b: Vec<RInterval>,
    pub switch1: bool,
    pub switch2: bool,
    pub switch3: bool,
}

impl SwitchCertificate {
    pub fn holds(&self) -> bool {
        self.switch1 && self.switch2 && self.switch3
    }
}

/// Check the three switch inequalities for β in [β_m, β_{m+1}), exactly.
pub fn certify_switches(beta: &BetaValue, m: u32) -> Result<SwitchCertificate> {
    if !beta.is_algebraic() {
        return Err(ThueMorseError::Domain("switch certification needs an algebraic β".into()));
    }
    let f = Field::new(beta)?;
    let mp = marked_points(&f, m)?;
    let b = f.gen();
    let inv_b = f.inv(&b)?;
    let c = f.inv(&f.add_int(&b, -1))?;
    let upper = f.mul(&inv_b, &c); // 1/(β(β−1))
    let lt = |x: &Elem, y: &Elem| -> Result<bool> { Ok(f.cmp(x, y)? == Ordering::Less) };
    let le = |x: &Elem, y: &Elem| -> Result<bool> { Ok(f.cmp(x, y)? != Ordering::Greater) };
    let n = m as usize;
    let mut s1 = true;
    for i in 0..n - 1 {
        s1 &= lt(&mp.a[i], &mp.a[i + 1])?;
    }
    s1 &= le(&mp.a[n - 1], &inv_b)? && lt(&inv_b, &mp.a[n])?;
    let mut s2 = lt(&mp.b[n], &upper)? && le(&upper, &mp.b[n - 1])?;
    for i in 0..n - 1 {
        s2 &= lt(&mp.b[i + 1], &mp.b[i])?;
    }
    let s3 = lt(&mp.a[n], &mp.b[n])?;
    let enc = |v: &Vec<Elem>| v.iter().map(|e| f.enclose(e, 128)).collect::<betafibre_numerics::Result<Vec<_>>>();
    Ok(SwitchCertificate { m, a: enc(&mp.a)?, b: enc(&mp.b)?, switch1: s1, switch2: s2, switch3: s3 })
}

/// m with β ∈ [β_m, β_{m+1}), with the switch inequalities certified at β.
pub fn locate_rung(beta: &BetaValue, max_rungs: usize) -> Result<SwitchCertificate> {
    let phi = ladder_rung(1)?;
    if compare_beta(beta, &phi)? == Ordering::Less {
        return Err(ThueMorseError::Domain("β is below the golden ratio".into()));
    }
    let mut m = 1u32;
    loop {
        if m as usize >= max_rungs {
            return Err(ThueMorseError::LadderExhausted { rungs: max_rungs });
        }
        let next = ladder_rung(m + 1)?;
        if compare_beta(beta, &next)? == Ordering::Less {
            break;
        }
        m += 1;
    }
    let cert = certify_switches(beta, m)?;
    if !cert.holds() {
        return Err(ThueMorseError::Domain(format!("switch inequalities fail at rung {m}")));
    }
    Ok(cert)
}

/// Interval form of `periodic_value`.
pub fn periodic_value_iv(b: &RInterval, p: &[u8]) -> RInterval {
    let mut num = RInterval::from_int(0, b.prec());
    for &d in p {
        num = num.mul(b).add_int(d as i64);
    }
    num.div(&b.powi(p.len() as i64).add_int(-1))
}

/// Apply a word of T₀/T₁ maps to an enclosure.
pub fn apply_iv(b: &RInterval, w: &MapWord, x: &RInterval) -> RInterval {
    w.maps().iter().fold(x.clone(), |v, &d| b.mul(&v).add_int(-(d as i64)))
}

