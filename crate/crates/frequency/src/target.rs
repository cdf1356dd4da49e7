//! Frequency targets, accumulation schedules and growth functions.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{FrequencyError, Result};

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Closed window [1/2 − c, 1/2 + c] with c = 1/(2n).
pub fn window(n: usize) -> (BigRational, BigRational) {
    let c = BigRational::new(1.into(), BigInt::from(2 * n));
    (half() - &c, half() + c)
}

/// A digit frequency certified to lie in the window for n(β) = `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyTarget {
    p: BigRational,
    n: usize,
}

impl FrequencyTarget {
    pub fn new(p: BigRational, n: usize) -> Result<FrequencyTarget> {
        let (lo, hi) = window(n);
        if p < lo || p > hi {
            return Err(FrequencyError::Domain(format!("frequency {p} is outside the window [{lo}, {hi}]")));
        }
        Ok(FrequencyTarget { p, n })
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Targets visited by the accumulation generator.
#[derive(Clone, Debug)]
pub enum Schedule {
    /// Cycle through the listed targets forever.
    Cycle(Vec<BigRational>),
    /// Every dyadic rational in the open window, each listed again at every later stage.
    Dyadic,
}

/// Iterator over a schedule's targets, validated against the open window.
#[derive(Clone, Debug)]
pub struct ScheduleIter {
    schedule: Schedule,
    lo: BigRational,
    hi: BigRational,
    pos: usize,
    // Dyadic state: current stage, level and numerator.
    stage: u32,
    level: u32,
    num: BigInt,
}

impl ScheduleIter {
    pub fn new(schedule: Schedule, n: usize) -> Result<ScheduleIter> {
        let (lo, hi) = window(n);
        if let Schedule::Cycle(ts) = &schedule {
            if ts.is_empty() {
                return Err(FrequencyError::Schedule("empty schedule".into()));
            }
            for t in ts {
                if t == &lo || t == &hi {
                    return Err(FrequencyError::Schedule(format!("target {t} lies on the window boundary")));
                }
                if t < &lo || t > &hi {
                    return Err(FrequencyError::Domain(format!("target {t} is outside the window [{lo}, {hi}]")));
                }
            }
        }
        let mut it = ScheduleIter { schedule, lo, hi, pos: 0, stage: 1, level: 1, num: BigInt::zero() };
        it.reset_level();
        Ok(it)
    }

    fn reset_level(&mut self) {
        // Smallest numerator with num/2^level > lo.
        let scale = BigInt::one() << self.level;
        let v = &self.lo * BigRational::from_integer(scale);
        self.num = v.floor().to_integer() + 1;
    }

    fn next_dyadic(&mut self) -> BigRational {
        loop {
            let scale = BigInt::one() << self.level;
            let t = BigRational::new(self.num.clone(), scale);
            if t >= self.hi {
                if self.level < self.stage {
                    self.level += 1;
                } else {
                    self.stage += 1;
                    self.level = 1;
                }
                self.reset_level();
                continue;
            }
            self.num += 1;
            // Reduced form only, so each dyadic appears once per stage.
            if self.level == 1 || t.denom() == &(BigInt::one() << self.level) {
                return t;
            }
        }
    }
}

impl Iterator for ScheduleIter {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        match &self.schedule {
            Schedule::Cycle(ts) => {
                let t = ts[self.pos % ts.len()].clone();
                self.pos += 1;
                Some(t)
            }
            Schedule::Dyadic => Some(self.next_dyadic()),
        }
    }
}

/// f(n) = scale · n^(num/den), with 0 < num/den ≤ 1 so that f is increasing and concave.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthFunction {
    Power { num: u32, den: u32, scale: BigRational },
}

impl GrowthFunction {
    pub fn sqrt() -> GrowthFunction {
        GrowthFunction::Power { num: 1, den: 2, scale: BigRational::one() }
    }

    pub fn linear(scale: BigRational) -> GrowthFunction {
        GrowthFunction::Power { num: 1, den: 1, scale }
    }

    pub fn validate(&self) -> Result<()> {
        let GrowthFunction::Power { num, den, scale } = self;
        if *num == 0 || *den == 0 || num > den {
            return Err(FrequencyError::Domain("growth exponent must lie in (0, 1]".into()));
        }
        if !scale.is_positive() {
            return Err(FrequencyError::Domain("growth scale must be positive".into()));
        }
        Ok(())
    }

    pub fn eval_f64(&self, n: u64) -> f64 {
        let GrowthFunction::Power { num, den, scale } = self;
        rat_f64(scale) * (n as f64).powf(*num as f64 / *den as f64)
    }

    /// Rational bounds on f(n+1) − f(n) of width about 2^-bits.
    pub fn increment_bounds(&self, n: u64, bits: u32) -> (BigRational, BigRational) {
        let GrowthFunction::Power { num, den, scale } = self;
        let a = root_bounds(&(BigUint::from(n + 1).pow(*num)), *den, bits);
        let b = root_bounds(&(BigUint::from(n).pow(*num)), *den, bits);
        let lo = (&a.0 - &b.1) * scale;
        let hi = (&a.1 - &b.0) * scale;
        (lo, hi)
    }

    /// Sign of s − t·f(n), exactly.
    pub fn cmp_scaled(&self, s: i64, t: &BigRational, n: u64) -> Ordering {
        let GrowthFunction::Power { num, den, scale } = self;
        let c = t * scale;
        let s = BigInt::from(s);
        if c.is_zero() || n == 0 {
            return s.cmp(&BigInt::zero());
        }
        let q = *den as usize;
        // Both sides positive: compare s^q with c^q · n^num.
        let rhs_pow = |c: &BigRational| {
            num_traits::pow(c.clone(), q) * BigRational::from_integer(num_traits::pow(BigInt::from(n), *num as usize))
        };
        if c.is_positive() {
            if !s.is_positive() {
                return Ordering::Less;
            }
            BigRational::from_integer(num_traits::pow(s, q)).cmp(&rhs_pow(&c))
        } else {
            if !s.is_negative() {
                return Ordering::Greater;
            }
            rhs_pow(&-c).cmp(&BigRational::from_integer(num_traits::pow(-s, q)))
        }
    }
}

/// Bounds lo ≤ v^(1/q) < hi with hi − lo = 2^-bits.
fn root_bounds(v: &BigUint, q: u32, bits: u32) -> (BigRational, BigRational) {
    let shifted = v << (q as usize * bits as usize);
    let r = shifted.nth_root(q);
    let scale = BigInt::one() << bits;
    let lo = BigRational::new(BigInt::from_biguint(Sign::Plus, r.clone()), scale.clone());
    let hi = BigRational::new(BigInt::from_biguint(Sign::Plus, r + 1u32), scale);
    (lo, hi)
}

pub(crate) fn rat_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
