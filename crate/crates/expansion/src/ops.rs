//! The expanding maps on enclosures, projections and the walk into O.

use std::cmp::Ordering;

use betafibre_numerics::{BetaValue, Cmp3, Elem, RInterval, DEFAULT_PREC, PREC_CAP};

use crate::error::{ExpansionError, Result};
use crate::fixed::FixedShadow;
use crate::intervals::{CanonicalIntervals, ExactBase};
use crate::word::{Alphabet, DigitWord, MapWord};

fn beta_at(beta: &BetaValue, prec: u32) -> Result<RInterval> {
    let b = match beta.enclose_bits(prec) {
        Ok(b) => b,
        Err(_) => beta.enclosure(),
    };
    Ok(b.with_prec(prec))
}

/// T_d(x) = βx − d on an enclosure.
pub fn apply_map(d: i8, x: &RInterval, beta: &BetaValue) -> Result<RInterval> {
    let b = beta_at(beta, x.prec().max(DEFAULT_PREC))?;
    Ok(b.mul(x).add(&RInterval::from_int(-d as i64, x.prec())))
}

/// Cumulative images of x along w; the first entry is x itself.
pub fn orbit(x: &RInterval, w: &MapWord, beta: &BetaValue) -> Result<Vec<RInterval>> {
    let b = beta_at(beta, x.prec().max(DEFAULT_PREC))?;
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut cur = x.clone();
    out.push(cur.clone());
    for &d in w.maps() {
        cur = b.mul(&cur).add(&RInterval::from_int(-d as i64, cur.prec()));
        out.push(cur.clone());
    }
    Ok(out)
}

/// Value of a finite projection: the partial sum and the enclosure of every completion.
#[derive(Clone, Debug)]
pub struct Projection {
    pub partial: RInterval,
    pub completions: RInterval,
}

/// π_β of a prefix: Σ_{i≤n} ε_i β^{-i}, plus the set of all infinite completions.
pub fn project(digits: &DigitWord, beta: &BetaValue) -> Result<Projection> {
    let prec = DEFAULT_PREC.max(64 + digits.len() as u32 / 8);
    let b = beta_at(beta, prec)?;
    let r = b.recip();
    let mut acc = RInterval::from_int(0, prec);
    for &d in digits.digits().iter().rev() {
        acc = acc.add(&RInterval::from_int(d as i64, prec)).mul(&r);
    }
    let tail = RInterval::geometric_tail(&b, digits.len() as u64)?;
    let completions = match digits.alphabet() {
        Alphabet::ZeroOne => acc.add(&RInterval::from_int(0, prec).hull(&tail)),
        Alphabet::PlusMinus => acc.add(&tail.neg().hull(&tail)),
    };
    Ok(Projection { partial: acc, completions })
}

/// π_{β₂,β₃} of a {−1,1} prefix: digit i is divided by β₂^{#−1 in first i} β₃^{#+1 in first i}.
pub fn project_affine(digits: &DigitWord, beta2: &BetaValue, beta3: &BetaValue) -> Result<Projection> {
    let prec = DEFAULT_PREC;
    let b2 = beta_at(beta2, prec)?;
    let b3 = beta_at(beta3, prec)?;
    project_affine_iv(digits, &b2, &b3)
}

/// As `project_affine`, with the bases given as (possibly wide) enclosures.
pub fn project_affine_iv(digits: &DigitWord, b2: &RInterval, b3: &RInterval) -> Result<Projection> {
    if digits.alphabet() != Alphabet::PlusMinus {
        return Err(ExpansionError::Domain("affine projection needs the {-1,1} alphabet".into()));
    }
    let one = RInterval::from_int(1, b2.prec());
    if !(b2.cmp3(&one) == Cmp3::Greater && b3.cmp3(&one) == Cmp3::Greater) {
        return Err(ExpansionError::Domain("affine projection needs β₂, β₃ > 1".into()));
    }
    let prec = b2.prec().max(b3.prec());
    let r2 = b2.recip();
    let r3 = b3.recip();
    let mut acc = RInterval::from_int(0, prec);
    let mut factor = RInterval::from_int(1, prec);
    for &d in digits.digits().iter().rev() {
        let r = if d == 1 { &r3 } else { &r2 };
        acc = acc.add(&RInterval::from_int(d as i64, prec)).mul(r);
    }
    for &d in digits.digits() {
        factor = factor.mul(if d == 1 { &r3 } else { &r2 });
    }
    let lo_base = if b2.lo() <= b3.lo() { b2 } else { b3 };
    let m = RInterval::new(lo_base.lo().clone(), lo_base.lo().clone(), prec);
    let t = RInterval::geometric_tail(&m, 0)?.mul(&factor);
    let completions = acc.add(&t.neg().hull(&t));
    Ok(Projection { partial: acc, completions })
}

/// Deterministic walk into O: T_low while below O, T_1 while above. Enclosures that
/// straddle an endpoint of O are recomputed from x at doubled precision.
pub fn map_into_o(x: &RInterval, beta: &BetaValue, alphabet: Alphabet) -> Result<MapWord> {
    let ci = CanonicalIntervals::new(beta, alphabet)?;
    let (lo, hi) = (&ci.i.0, &ci.i.1);
    if x.cmp3(lo) != Cmp3::Greater || x.cmp3(hi) != Cmp3::Less {
        return Err(ExpansionError::Domain(
            "x must lie strictly inside the open expansion domain".into(),
        ));
    }
    let mut prec = x.prec().max(DEFAULT_PREC);
    'outer: loop {
        let ci = if prec == DEFAULT_PREC { ci.clone() } else { canonical_at(beta, alphabet, prec)? };
        let b = beta_at(beta, prec)?;
        let mut w = MapWord::empty(alphabet);
        let mut cur = x.with_prec(prec);
        loop {
            let below = cur.cmp3(&ci.o.0) == Cmp3::Less;
            let above = cur.cmp3(&ci.o.1) == Cmp3::Greater;
            let inside = ci.o.0.hi() <= cur.lo() && cur.hi() <= ci.o.1.lo();
            if inside {
                return Ok(w);
            }
            let d = if below {
                alphabet.low()
            } else if above {
                1
            } else {
                if prec >= PREC_CAP {
                    return Err(ExpansionError::BoundaryUndecidable("orbit straddles an endpoint of O".into()));
                }
                prec *= 2;
                continue 'outer;
            };
            w.push(d)?;
            cur = b.mul(&cur).add(&RInterval::from_int(-d as i64, prec));
            if w.len() > 1_000_000 {
                return Err(ExpansionError::Domain("orbit does not reach O".into()));
            }
        }
    }
}

fn canonical_at(beta: &BetaValue, alphabet: Alphabet, prec: u32) -> Result<CanonicalIntervals> {
    if beta.is_algebraic() {
        ExactBase::new(beta, alphabet)?.enclosures(prec)
    } else {
        CanonicalIntervals::new(beta, alphabet)
    }
}

/// Exact version of `map_into_o` for x ∈ Q(β).
pub fn map_into_o_exact(base: &ExactBase, x: &Elem) -> Result<MapWord> {
    if !base.in_open_domain(x)? {
        return Err(ExpansionError::Domain(
            "x must lie strictly inside the open expansion domain".into(),
        ));
    }
    let f = &base.field;
    let mut w = MapWord::empty(base.alphabet);
    let mut cur = x.clone();
    loop {
        let d = if base.cmp(&cur, &base.o_lo)? == Ordering::Less {
            base.alphabet.low()
        } else if base.cmp(&cur, &base.o_hi)? == Ordering::Greater {
            1
        } else {
            return Ok(w);
        };
        w.push(d)?;
        cur = f.normalize(&f.apply(&cur, d as i64));
    }
}

/// Exact orbit of a point with a cheap interval shadow.
///
/// Digits are buffered and folded into the exact state in chunks. Between folds the point is
/// followed by an i128 fixed-point interval, or by a wide `RInterval` when β is too close to 1
/// for the fixed-point range.
#[derive(Clone, Debug)]
pub struct OrbitTracker {
    base: ExactBase,
    exact: Elem,
    pending: Vec<i8>,
    shadow: Shadow,
    steps: u64,
}

#[derive(Clone, Debug)]
enum Shadow {
    Fixed(FixedShadow),
    Wide { approx: RInterval, beta_iv: RInterval, prec: u32 },
}

const TRACKER_CHUNK: usize = 512;
const SHADOW_BITS: u32 = 128;

impl OrbitTracker {
    pub fn new(base: &ExactBase, x: &Elem) -> Result<OrbitTracker> {
        let beta = base.beta().enclosure();
        let bhi = beta.hi_fin().map(|d| d.to_f64()).unwrap_or(2.0);
        let blo = beta.lo_fin().map(|d| d.to_f64()).unwrap_or(1.0);
        // Orbit values stay within the expansion domain, |x| ≤ 1/(β−1).
        let bound = 1.0 / (blo - 1.0).max(1e-12);
        let fixed = match FixedShadow::fraction_bits(bound) {
            Some(f) => {
                let b = base.beta().enclose_bits(f + 64)?;
                let xe = base.field.enclose(x, f + 8)?;
                FixedShadow::new(f, &b, &xe, bound)
            }
            None => None,
        };
        let shadow = match fixed {
            Some(s) => Shadow::Fixed(s),
            None => {
                let prec = SHADOW_BITS + (TRACKER_CHUNK as f64 * bhi.log2().max(0.0)).ceil() as u32 + 64;
                Shadow::Wide {
                    approx: base.field.enclose(x, prec)?,
                    beta_iv: base.beta().enclose_bits(prec + 32)?.with_prec(prec),
                    prec,
                }
            }
        };
        Ok(OrbitTracker { base: base.clone(), exact: x.clone(), pending: Vec::new(), shadow, steps: 0 })
    }

    /// Exact current point; folds any buffered digits first.
    pub fn exact(&mut self) -> &Elem {
        self.sync();
        &self.exact
    }

    /// Enclosure of the current point.
    pub fn enclosure(&self) -> RInterval {
        match &self.shadow {
            Shadow::Fixed(s) => s.to_interval(),
            Shadow::Wide { approx, .. } => approx.clone(),
        }
    }

    pub fn base(&self) -> &ExactBase {
        &self.base
    }

    /// Number of maps applied so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn apply_word(&mut self, digits: &[i8]) -> Result<()> {
        for &d in digits {
            self.pending.push(d);
            self.steps += 1;
            let ok = match &mut self.shadow {
                Shadow::Fixed(s) => s.apply(d),
                Shadow::Wide { approx, beta_iv, prec } => {
                    *approx = beta_iv.mul(approx).add(&RInterval::from_int(-d as i64, *prec));
                    match approx.width() {
                        Some(w) => w.is_zero() || w.top() <= -(SHADOW_BITS as i64 / 2),
                        None => false,
                    }
                }
            };
            if !ok || self.pending.len() >= TRACKER_CHUNK {
                self.resync()?;
            }
        }
        Ok(())
    }

    fn sync(&mut self) {
        if !self.pending.is_empty() {
            self.exact = self.base.field.apply_word(&self.exact, &self.pending);
            self.pending.clear();
        }
    }

    /// Fold pending digits and re-derive the shadow from the exact point.
    fn resync(&mut self) -> Result<()> {
        self.sync();
        let field = &self.base.field;
        match &mut self.shadow {
            Shadow::Fixed(s) => {
                let e = field.enclose(&self.exact, s.bits() + 8)?;
                if !s.reseed(&e) {
                    return Err(ExpansionError::Domain("orbit left the expansion domain".into()));
                }
            }
            Shadow::Wide { approx, prec, .. } => *approx = field.enclose(&self.exact, *prec)?,
        }
        Ok(())
    }

    /// Exact order against a field element.
    pub fn cmp_exact(&mut self, e: &Elem) -> Result<Ordering> {
        self.sync();
        self.base.cmp(&self.exact, e)
    }

    /// Order against a field element, trying `enc` (an enclosure of `e`) first.
    pub fn cmp_with(&mut self, e: &Elem, enc: &RInterval) -> Result<Ordering> {
        match self.enclosure().cmp3(enc) {
            Cmp3::Less => Ok(Ordering::Less),
            Cmp3::Greater => Ok(Ordering::Greater),
            Cmp3::Overlapping => self.cmp_exact(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn cubic() -> BetaValue {
        BetaValue::parse("poly:x^3-x^2-1:[1.4,1.5]").unwrap()
    }

    #[test]
    fn map_into_o_from_small_x() {
        let b = cubic();
        let w = map_into_o(&RInterval::from_f64(0.1, 128), &b, Alphabet::ZeroOne).unwrap();
        // Oracle: multiply by β until the value reaches 0.8711568.
        let beta = 1.465571231876768f64;
        let mut k = 0;
        let mut v = 0.1;
        while v < 0.8711568 {
            v *= beta;
            k += 1;
        }
        assert_eq!(w.maps(), vec![0i8; k].as_slice());
        assert!(map_into_o(&RInterval::from_int(0, 128), &b, Alphabet::ZeroOne).is_err());
        let inside = map_into_o(&RInterval::from_f64(1.0, 128), &b, Alphabet::ZeroOne).unwrap();
        assert!(inside.is_empty());
    }

    #[test]
    fn exact_walk_agrees_with_interval_walk() {
        let b = cubic();
        let base = ExactBase::new(&b, Alphabet::PlusMinus).unwrap();
        for &(n, d) in &[(1i64, 3i64), (-7, 4), (2, 1), (-1, 100)] {
            let r = BigRational::new(n.into(), d.into());
            let e = base.field.from_rational(&r);
            let w1 = map_into_o_exact(&base, &e).unwrap();
            let w2 = map_into_o(&RInterval::from_rational(&r, 256), &b, Alphabet::PlusMinus).unwrap();
            assert_eq!(w1, w2);
        }
    }

    #[test]
    fn projection_examples() {
        let b = BetaValue::parse("dec:1.5").unwrap();
        let ones = DigitWord::new(Alphabet::ZeroOne, vec![1; 10]).unwrap();
        let p = project(&ones, &b).unwrap();
        let exact = (1.0 - 1.5f64.powi(-10)) / 0.5;
        assert!((p.partial.mid_f64() - exact).abs() < 1e-14);
        assert!(p.completions.contains(&p.partial));
        let w = DigitWord::new(Alphabet::PlusMinus, vec![-1, 1]).unwrap();
        let b2 = BetaValue::parse("1.2").unwrap();
        let b3 = BetaValue::parse("1.7").unwrap();
        let q = project_affine(&w, &b2, &b3).unwrap();
        assert!((q.partial.mid_f64() - (-1.0 / 1.2 + 1.0 / (1.2 * 1.7))).abs() < 1e-14);
    }
}
