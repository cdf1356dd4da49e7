//! Table-driven generators for β < φ.

use std::cmp::Ordering;
use std::sync::Arc;

use betafibre_expansion::{Alphabet, ExactBase};
use betafibre_numerics::{BetaValue, Elem, RInterval};
use betafibre_synthesis::{build_partition_table, Direction, PartitionTable};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{FrequencyError, Result};
use crate::stream::{Checkpoint, Core, ExpansionStream, GeneratorKind, Rule};
use crate::target::{rat_f64, window, FrequencyTarget, GrowthFunction, Schedule, ScheduleIter};

fn table_for(beta: &BetaValue, alphabet: Alphabet) -> Result<Arc<PartitionTable>> {
    Ok(Arc::new(build_partition_table(beta, alphabet)?))
}

fn start(table: &PartitionTable, x: &BigRational) -> Result<(Core, Elem)> {
    let base: ExactBase = table.base.clone();
    let xe = base.field.from_rational(x);
    if !base.in_open_domain(&xe)? {
        return Err(FrequencyError::Domain(format!("x = {x} is outside the open expansion domain")));
    }
    Ok((Core::new(base, &xe)?, xe))
}

/// low − p·len as an exact rational.
fn deviation(core: &Core, p: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(core.low)) - p * BigRational::from_integer(BigInt::from(core.len()))
}

/// Append ω¹ when the low digit is at or above its share, ω⁰ otherwise.
fn frequency_block(core: &mut Core, table: &PartitionTable, p: &BigRational) -> Result<()> {
    let dir = if deviation(core, p).is_negative() { Direction::ZeroHeavy } else { Direction::OneHeavy };
    let w = core.lookup(table, dir)?;
    core.push(w.maps())
}

struct FrequencyRule {
    table: Arc<PartitionTable>,
    p: BigRational,
    n: usize,
    /// Hybrid runs certify the signed sum Σε − len·x = 2(p·len − low) instead.
    signed: bool,
}

impl Rule for FrequencyRule {
    fn step(&mut self, core: &mut Core) -> Result<Checkpoint> {
        frequency_block(core, &self.table, &self.p)?;
        core.check_in_o()?;
        let mut dev = deviation(core, &self.p).abs();
        let mut bound = BigRational::from_integer(self.n.into());
        if self.signed {
            dev *= BigRational::from_integer(2.into());
            bound *= BigRational::from_integer(2.into());
        }
        if dev > bound {
            return Err(FrequencyError::CertificateViolation(format!(
                "deviation {dev} exceeds {bound} after {} digits",
                core.len()
            )));
        }
        Ok(Checkpoint {
            checkpoint: core.digits.len() as u64,
            count0: core.low,
            count1: core.high,
            value: rat_f64(&dev),
            bound: rat_f64(&bound),
            target: None,
        })
    }
}

/// Expansion of x whose low digit has frequency p (the low digit is 0, or −1 for PlusMinus).
pub fn frequency_expansion(
    x: &BigRational,
    beta: &BetaValue,
    p: &BigRational,
    alphabet: Alphabet,
) -> Result<ExpansionStream> {
    frequency_expansion_with_table(x, table_for(beta, alphabet)?, p)
}

/// As `frequency_expansion`, reusing a prebuilt table.
pub fn frequency_expansion_with_table(
    x: &BigRational,
    table: Arc<PartitionTable>,
    p: &BigRational,
) -> Result<ExpansionStream> {
    let target = FrequencyTarget::new(p.clone(), table.n_beta)?;
    let (core, xe) = start(&table, x)?;
    let rule = FrequencyRule { n: table.n_beta, table, p: target.p().clone(), signed: false };
    ExpansionStream::new(GeneratorKind::Frequency, core, &xe, Box::new(rule))
}

struct AccumulationRule {
    table: Arc<PartitionTable>,
    targets: ScheduleIter,
    current: BigRational,
    n: usize,
}

impl Rule for AccumulationRule {
    fn step(&mut self, core: &mut Core) -> Result<Checkpoint> {
        frequency_block(core, &self.table, &self.current)?;
        core.check_in_o()?;
        let dev = deviation(core, &self.current).abs();
        let bound = BigRational::from_integer(self.n.into());
        let hit = dev <= bound;
        let cp = Checkpoint {
            checkpoint: core.digits.len() as u64,
            count0: core.low,
            count1: core.high,
            value: rat_f64(&dev),
            bound: rat_f64(&bound),
            target: hit.then(|| self.current.clone()),
        };
        if hit {
            self.current = self.targets.next().expect("schedules are infinite");
        }
        Ok(cp)
    }
}

/// Expansion whose running low-digit frequency accumulates at every scheduled target.
///
/// Checkpoints with `target` set are the recorded indices nₖ.
pub fn accumulation_expansion(
    x: &BigRational,
    beta: &BetaValue,
    schedule: Schedule,
    alphabet: Alphabet,
) -> Result<ExpansionStream> {
    accumulation_expansion_with_table(x, table_for(beta, alphabet)?, schedule)
}

pub fn accumulation_expansion_with_table(
    x: &BigRational,
    table: Arc<PartitionTable>,
    schedule: Schedule,
) -> Result<ExpansionStream> {
    let mut targets = ScheduleIter::new(schedule, table.n_beta)?;
    let current = targets.next().expect("schedules are infinite");
    let (core, xe) = start(&table, x)?;
    let rule = AccumulationRule { n: table.n_beta, table, targets, current };
    ExpansionStream::new(GeneratorKind::Accumulation, core, &xe, Box::new(rule))
}

/// ±1 expansion of x whose Cesàro digit average also tends to x; needs |x| ≤ 2c.
pub fn hybrid_expansion(x: &BigRational, beta: &BetaValue) -> Result<ExpansionStream> {
    hybrid_expansion_with_table(x, table_for(beta, Alphabet::PlusMinus)?)
}

pub fn hybrid_expansion_with_table(x: &BigRational, table: Arc<PartitionTable>) -> Result<ExpansionStream> {
    if table.alphabet != Alphabet::PlusMinus {
        return Err(FrequencyError::Domain("hybrid expansions use the PlusMinus alphabet".into()));
    }
    let two_c = BigRational::new(1.into(), BigInt::from(table.n_beta));
    if x.abs() > two_c {
        return Err(FrequencyError::Domain(format!("|x| must be at most 2c = {two_c}")));
    }
    // Frequency of −1 is (1 − x)/2.
    let p = (BigRational::one() - x) / BigRational::from_integer(2.into());
    let (core, xe) = start(&table, x)?;
    let rule = FrequencyRule { n: table.n_beta, table, p, signed: true };
    ExpansionStream::new(GeneratorKind::Hybrid, core, &xe, Box::new(rule))
}

/// Bits used for the first attempt at certifying a growth increment.
const GROWTH_BITS: u32 = 64;

/// Certified test f(n+1) − f(n) < b_lo.
fn increment_below(f: &GrowthFunction, n: u64, b: &(BigRational, BigRational)) -> Result<bool> {
    let mut bits = GROWTH_BITS;
    loop {
        let (lo, hi) = f.increment_bounds(n, bits);
        if hi < b.0 {
            return Ok(true);
        }
        if lo >= b.1 {
            return Ok(false);
        }
        if bits >= 1024 {
            return Err(FrequencyError::BoundaryUndecidable(format!("growth increment at n = {n}")));
        }
        bits *= 4;
    }
}

fn violation(f: &GrowthFunction, n: u64, b: &(BigRational, BigRational)) -> FrequencyError {
    let (lo, _) = f.increment_bounds(n, GROWTH_BITS);
    FrequencyError::GrowthViolation {
        n,
        increment: format!("{:.6e}", rat_f64(&lo)),
        bound: format!("{:.6e}", rat_f64(&b.1)),
    }
}

/// Smallest N with f(n+1) − f(n) < (β−1)/n(β) for all n ≥ N, using concavity.
fn growth_start(f: &GrowthFunction, b: &(BigRational, BigRational)) -> Result<u64> {
    let GrowthFunction::Power { num, den, .. } = f;
    if num == den {
        return if increment_below(f, 1, b)? { Ok(1) } else { Err(violation(f, 1, b)) };
    }
    let mut hi = 1u64;
    while !increment_below(f, hi, b)? {
        if hi > 1 << 60 {
            return Err(violation(f, hi, b));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(1);
    }
    // Invariant: increment at lo fails, at hi passes.
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if increment_below(f, mid, b)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

struct SlowGrowthRule {
    table: Arc<PartitionTable>,
    f: GrowthFunction,
    x: BigRational,
    x_f64: f64,
    bound_b: (BigRational, BigRational),
    start: u64,
    sum: i64,
    settled: bool,
    last_sign: Option<Ordering>,
    bound: f64,
    observed: f64,
}

impl SlowGrowthRule {
    fn sign(&self, len: u64) -> Ordering {
        self.f.cmp_scaled(self.sum, &self.x, len)
    }
}

impl Rule for SlowGrowthRule {
    fn step(&mut self, core: &mut Core) -> Result<Checkpoint> {
        let len = core.digits.len() as u64;
        let q = self.sign(len);
        let dir = if q == Ordering::Less { Direction::OneHeavy } else { Direction::ZeroHeavy };
        let w = core.lookup(&self.table, dir)?;
        let before = core.digits.len() as u64;
        core.push(w.maps())?;
        core.check_in_o()?;
        for (k, &d) in w.maps().iter().enumerate() {
            self.sum += d as i64;
            if self.settled {
                let i = before + k as u64 + 1;
                let dev = (self.sum as f64 - self.f.eval_f64(i) * self.x_f64).abs();
                self.observed = self.observed.max(dev);
            }
        }
        let len = core.digits.len() as u64;
        if len >= self.start {
            if !increment_below(&self.f, len, &self.bound_b)? {
                return Err(violation(&self.f, len, &self.bound_b));
            }
            let q_new = self.sign(len);
            let changed = match self.last_sign {
                Some(prev) => (prev == Ordering::Less) != (q_new == Ordering::Less),
                None => false,
            };
            if !self.settled && changed {
                self.settled = true;
            }
            self.last_sign = Some(q_new);
        }
        let value = (self.sum as f64 - self.f.eval_f64(len) * self.x_f64).abs();
        if self.settled {
            self.observed = self.observed.max(value);
            if self.observed > self.bound {
                return Err(FrequencyError::CertificateViolation(format!(
                    "normalized sum drifted by {} > {} at n = {len}",
                    self.observed, self.bound
                )));
            }
        }
        Ok(Checkpoint {
            checkpoint: len,
            count0: core.low,
            count1: core.high,
            value,
            bound: if self.settled { self.bound } else { f64::INFINITY },
            target: None,
        })
    }
}

/// ±1 expansion of x with |Σ_{i≤n} εᵢ − f(n)·x| bounded once the first sign change has happened.
///
/// Checkpoints before that index carry an infinite bound.
pub fn slow_growth_expansion(x: &BigRational, beta: &BetaValue, f: GrowthFunction) -> Result<ExpansionStream> {
    slow_growth_expansion_with_table(x, table_for(beta, Alphabet::PlusMinus)?, f)
}

pub fn slow_growth_expansion_with_table(
    x: &BigRational,
    table: Arc<PartitionTable>,
    f: GrowthFunction,
) -> Result<ExpansionStream> {
    if table.alphabet != Alphabet::PlusMinus {
        return Err(FrequencyError::Domain("slow-growth expansions use the PlusMinus alphabet".into()));
    }
    f.validate()?;
    let n = table.n_beta;
    let b: RInterval = table.beta.enclose_bits(128)?.add_int(-1).div(&RInterval::from_int(n as i64, 160));
    let bound_b = (
        b.lo_fin().expect("finite").to_rational(),
        b.hi_fin().expect("finite").to_rational(),
    );
    let start_n = growth_start(&f, &bound_b)?;
    let (core, xe) = start(&table, x)?;
    let sum: i64 = core.digits.iter().map(|&d| d as i64).sum();
    let rule = SlowGrowthRule {
        table,
        x_f64: rat_f64(x),
        x: x.clone(),
        f,
        bound_b,
        start: start_n.max(core.digits.len() as u64),
        sum,
        settled: false,
        last_sign: None,
        bound: (2 * n + 2) as f64,
        observed: 0.0,
    };
    ExpansionStream::new(GeneratorKind::SlowGrowth, core, &xe, Box::new(rule))
}

/// The constant C(β) = 2n(β) + 2 bounding slow-growth deviations past the first sign change.
pub fn slow_growth_constant(n_beta: usize) -> u64 {
    2 * n_beta as u64 + 2
}

/// Frequency window [1/2 − c, 1/2 + c] for a table.
pub fn frequency_window(table: &PartitionTable) -> (BigRational, BigRational) {
    window(table.n_beta)
}
