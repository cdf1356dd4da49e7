//! Simply normal expansions for β in [φ, β_KL).

use std::cmp::Ordering;

use betafibre_expansion::{Alphabet, ExactBase};
use betafibre_numerics::{BetaValue, Elem, RInterval};
use betafibre_thuemorse::{kappa, kappa_bar, locate_rung, marked_points, thue_morse, DEFAULT_RUNGS};
use num_rational::BigRational;

use crate::error::{FrequencyError, Result};
use crate::stream::{Checkpoint, Core, ExpansionStream, GeneratorKind, Rule};

const MARK_PREC: u32 = 192;
/// Escalation blocks tried before giving up on reaching the innermost interval.
const ESCALATION_CAP: usize = 1 << 20;

/// What to do when the orbit lands exactly on a marked point π((τⁱ)^∞) or π((τ̄ⁱ)^∞).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkedPolicy {
    /// Continue with the balanced periodic tail.
    EmitTail,
    /// Report `PreimageOfMarkedPoint`.
    Error,
}

/// Rung data for β in [β_m, β_{m+1}).
#[derive(Clone, Debug)]
pub struct NormalConstants {
    pub m: u32,
    /// Run-length bound of the T₀/T₁ drift step.
    pub l: u32,
    /// 2^m + l + 1.
    pub bound: u64,
}

/// Smallest j ≥ 0 with β^j·gap ≥ span, exactly.
fn least_power(base: &ExactBase, gap: &Elem, span: &Elem) -> Result<u32> {
    let f = &base.field;
    let b = f.gen();
    let mut v = gap.clone();
    for j in 0..10_000u32 {
        if base.cmp(&v, span)? != Ordering::Less {
            return Ok(j);
        }
        v = f.mul(&v, &b);
    }
    Err(FrequencyError::BoundaryUndecidable("run-length bound did not converge".into()))
}

/// l(β): runs of T₁ after T₀(b) and of T₀ after T₁(a) needed to re-enter O, with
/// a = π((τ^{m+1})^∞) and b = π((τ̄^{m+1})^∞).
pub fn run_length_bound(base: &ExactBase, a: &Elem, b: &Elem) -> Result<u32> {
    let f = &base.field;
    let c = &base.fix_high;
    let t0b = f.apply(b, 0);
    let t1a = f.normalize(&f.apply(a, 1));
    let j1 = least_power(base, &f.sub(c, &t0b), &f.sub(c, &base.o_hi))?;
    let j2 = least_power(base, &t1a, &base.o_lo)?;
    Ok(j1.max(j2))
}

pub fn normal_constants(beta: &BetaValue) -> Result<NormalConstants> {
    let cert = locate_rung(beta, DEFAULT_RUNGS)?;
    let base = ExactBase::new(beta, Alphabet::ZeroOne)?;
    let mp = marked_points(&base.field, cert.m)?;
    let m = cert.m as usize;
    let l = run_length_bound(&base, &mp.a[m], &mp.b[m])?;
    Ok(NormalConstants { m: cert.m, l, bound: (1u64 << cert.m) + l as u64 + 1 })
}

enum Region {
    Inner,
    /// Between a_i and a_{i+1} (1-based level i).
    Left(u32),
    /// Between b_{i+1} and b_i.
    Right(u32),
    OnA(u32),
    OnB(u32),
}

struct NormalRule {
    m: u32,
    a: Vec<(Elem, RInterval)>,
    b: Vec<(Elem, RInterval)>,
    l: u32,
    bound: u64,
    policy: MarkedPolicy,
    tail: Option<Vec<i8>>,
    max_imbalance: u64,
}

impl NormalRule {
    fn classify(&self, core: &mut Core) -> Result<Region> {
        let m = self.m as usize;
        for k in 0..=m {
            match core.cmp_point(&self.a[k].0, &self.a[k].1)? {
                Ordering::Less if k == 0 => {
                    return Err(FrequencyError::CertificateViolation("orbit left O".into()));
                }
                Ordering::Less => return Ok(Region::Left(k as u32)),
                Ordering::Equal => return Ok(Region::OnA(k as u32 + 1)),
                Ordering::Greater => {}
            }
        }
        for k in (0..=m).rev() {
            match core.cmp_point(&self.b[k].0, &self.b[k].1)? {
                Ordering::Less if k == m => return Ok(Region::Inner),
                Ordering::Less => return Ok(Region::Right(k as u32 + 1)),
                Ordering::Equal => return Ok(Region::OnB(k as u32 + 1)),
                Ordering::Greater => {}
            }
        }
        Err(FrequencyError::CertificateViolation("orbit left O".into()))
    }

    fn marked(&mut self, level: u32, high: bool) -> Result<Vec<i8>> {
        if self.policy == MarkedPolicy::Error {
            return Err(FrequencyError::PreimageOfMarkedPoint { level, which: if high { "b" } else { "a" } });
        }
        let w = thue_morse(level);
        let bits = if high { w.complement() } else { w.bits };
        let tail: Vec<i8> = bits.into_iter().map(|b| b as i8).collect();
        self.tail = Some(tail.clone());
        Ok(tail)
    }

    fn push_tracked(&mut self, core: &mut Core, w: &[i8]) -> Result<()> {
        let mut d = core.low as i64 - core.high as i64;
        for &x in w {
            d += if x == 0 { 1 } else { -1 };
            self.max_imbalance = self.max_imbalance.max(d.unsigned_abs());
        }
        core.push(w)
    }

    /// Escalate into the innermost interval; returns a periodic tail if a marked point is hit.
    fn escalate(&mut self, core: &mut Core) -> Result<Option<Vec<i8>>> {
        for _ in 0..ESCALATION_CAP {
            let block = match self.classify(core)? {
                Region::Inner => return Ok(None),
                Region::OnA(i) => return self.marked(i, false).map(Some),
                Region::OnB(i) => return self.marked(i, true).map(Some),
                Region::Left(i) => kappa(i),
                Region::Right(i) => kappa_bar(i),
            };
            self.push_tracked(core, block.maps())?;
        }
        Err(FrequencyError::BoundaryUndecidable("escalation did not reach the innermost interval".into()))
    }
}

impl Rule for NormalRule {
    fn step(&mut self, core: &mut Core) -> Result<Checkpoint> {
        if let Some(t) = self.tail.clone() {
            self.push_tracked(core, &t)?;
        } else if let Some(t) = self.escalate(core)? {
            self.push_tracked(core, &t)?;
        } else {
            // Drift against the current imbalance: T₀ then T₁ runs, or T₁ then T₀ runs.
            let (first, run) = if core.low >= core.high { (0i8, 1i8) } else { (1, 0) };
            self.push_tracked(core, &[first])?;
            let mut j = 0u32;
            loop {
                let outside = if run == 1 { core.above_o()? } else { core.below_o()? };
                if !outside {
                    break;
                }
                self.push_tracked(core, &[run])?;
                j += 1;
                if j > self.l {
                    return Err(FrequencyError::CertificateViolation(format!("drift run exceeded l = {}", self.l)));
                }
            }
        }
        core.check_in_o()?;
        if self.max_imbalance > self.bound {
            return Err(FrequencyError::CertificateViolation(format!(
                "imbalance {} exceeds {}",
                self.max_imbalance, self.bound
            )));
        }
        Ok(Checkpoint {
            checkpoint: core.digits.len() as u64,
            count0: core.low,
            count1: core.high,
            value: self.max_imbalance as f64,
            bound: self.bound as f64,
            target: None,
        })
    }
}

/// Simply normal {0,1} expansion of x for β in [φ, β_KL), with x given exactly in Q(β).
pub fn simply_normal_expansion_elem(x: &Elem, beta: &BetaValue, policy: MarkedPolicy) -> Result<ExpansionStream> {
    let nc = normal_constants(beta)?;
    let base = ExactBase::new(beta, Alphabet::ZeroOne)?;
    if !base.in_open_domain(x)? {
        return Err(FrequencyError::Domain("x is outside the open expansion domain".into()));
    }
    let mp = marked_points(&base.field, nc.m)?;
    let enc = |v: Vec<Elem>| -> Result<Vec<(Elem, RInterval)>> {
        v.into_iter()
            .map(|e| {
                let i = base.field.enclose(&e, MARK_PREC)?;
                Ok((e, i))
            })
            .collect()
    };
    let rule = NormalRule {
        m: nc.m,
        a: enc(mp.a)?,
        b: enc(mp.b)?,
        l: nc.l,
        bound: nc.bound,
        policy,
        tail: None,
        max_imbalance: 0,
    };
    let core = Core::new(base, x)?;
    ExpansionStream::new(GeneratorKind::SimplyNormal, core, x, Box::new(rule))
}

/// Simply normal {0,1} expansion of a rational x for β in [φ, β_KL).
pub fn simply_normal_expansion(x: &BigRational, beta: &BetaValue) -> Result<ExpansionStream> {
    let f = betafibre_numerics::Field::new(beta)?;
    simply_normal_expansion_elem(&f.from_rational(x), beta, MarkedPolicy::EmitTail)
}
