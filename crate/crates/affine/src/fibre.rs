//! Intervals inside vertical fibres, and reconstruction of fibre points as digit words.
//!
//! Write U(z) and L(z) for π_{β₂,β₃} of the sequences obtained from z ∈ Õ by repeatedly
//! applying the one-heavy and zero-heavy return words. After λ⁰ takes x into Õ, the interval
//! [π(λ⁰) + W(λ⁰)·L(z₀), π(λ⁰) + W(λ⁰)·U(z₀)] lies in the fibre, where W(w) is the vertical
//! contraction of w.

use std::sync::Arc;

use betafibre_expansion::{map_into_o_exact, Alphabet, DigitWord, MapWord, OrbitTracker};
use betafibre_numerics::{compare_beta, Elem, RInterval};
use betafibre_synthesis::{Direction, PartitionTable};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::delta::{word_string, DeltaCertificate};
use crate::error::{AffineError, Result};
use crate::params::AffineParams;

/// Digits generated for each endpoint of a fibre interval.
pub const ENDPOINT_DIGITS: usize = 2000;
/// Tail digits tried per decision in `point_in_fibre` before giving up.
const TAIL_CAP: usize = 8192;
const BASE_PREC: u32 = 256;

/// Contraction data for (β₂, β₃) at a fixed precision.
#[derive(Clone, Debug)]
struct Vertical {
    b2: RInterval,
    b3: RInterval,
    r2: RInterval,
    r3: RInterval,
    prec: u32,
}

impl Vertical {
    fn new(params: &AffineParams, prec: u32) -> Result<Vertical> {
        let (b2, b3) = params.vertical(prec + 32)?;
        let (b2, b3) = (b2.with_prec(prec), b3.with_prec(prec));
        Ok(Vertical { r2: b2.recip(), r3: b3.recip(), b2, b3, prec })
    }

    fn zero(&self) -> RInterval {
        RInterval::from_int(0, self.prec)
    }

    fn one(&self) -> RInterval {
        RInterval::from_int(1, self.prec)
    }

    /// (π(w), W(w)) for a finite word.
    fn word(&self, w: &[i8]) -> (RInterval, RInterval) {
        let (mut s, mut f) = (self.zero(), self.one());
        for &d in w {
            f = f.mul(if d == 1 { &self.r3 } else { &self.r2 });
            s = if d == 1 { s.add(&f) } else { s.sub(&f) };
        }
        (s, f)
    }

    /// Hull of π(w^∞) = π(w)/(1 − W(w)) over a word set.
    fn periodic_hull(&self, words: &[MapWord]) -> RInterval {
        words
            .iter()
            .map(|w| {
                let (p, f) = self.word(w.maps());
                p.div(&self.one().sub(&f))
            })
            .reduce(|a, b| a.hull(&b))
            .expect("nonempty table")
    }
}

/// Per-cell (π(w), W(w)) for both directions, and the periodic hulls J₋₁, J₁.
#[derive(Clone, Debug)]
struct WordValues {
    zero_heavy: Vec<(RInterval, RInterval)>,
    one_heavy: Vec<(RInterval, RInterval)>,
    hull_zero: RInterval,
    hull_one: RInterval,
}

impl WordValues {
    fn new(table: &PartitionTable, v: &Vertical) -> WordValues {
        let vals = |d: Direction| table.table(d).words.iter().map(|w| v.word(w.maps())).collect();
        WordValues {
            zero_heavy: vals(Direction::ZeroHeavy),
            one_heavy: vals(Direction::OneHeavy),
            hull_zero: v.periodic_hull(&table.zero_heavy.words),
            hull_one: v.periodic_hull(&table.one_heavy.words),
        }
    }

    fn get(&self, d: Direction, i: usize) -> &(RInterval, RInterval) {
        match d {
            Direction::ZeroHeavy => &self.zero_heavy[i],
            Direction::OneHeavy => &self.one_heavy[i],
        }
    }

    fn hull(&self, d: Direction) -> &RInterval {
        match d {
            Direction::ZeroHeavy => &self.hull_zero,
            Direction::OneHeavy => &self.hull_one,
        }
    }
}

fn lookup(tracker: &mut OrbitTracker, table: &PartitionTable, d: Direction) -> Result<usize> {
    let enc = tracker.enclosure();
    Ok(table.locate_by(d, &enc, |b| Ok(tracker.cmp_exact(b)?))?)
}

/// A fibre interval [ℓ, u] ⊂ Λˣ with the data needed to reconstruct its points.
#[derive(Clone, Debug)]
pub struct FibreCertificate {
    pub params: AffineParams,
    pub x: RInterval,
    pub lambda0: MapWord,
    /// Enclosures of ℓ and u.
    pub interval: (RInterval, RInterval),
    pub delta_used: BigRational,
    /// Digits after λ⁰ generated for each endpoint.
    pub endpoint_digits: usize,
    x_exact: Elem,
    table: Arc<PartitionTable>,
}

impl FibreCertificate {
    pub fn lower(&self) -> &RInterval {
        &self.interval.0
    }

    pub fn upper(&self) -> &RInterval {
        &self.interval.1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": 1,
            "params": self.params.to_json(),
            "x": [self.x.lo_decimal(20), self.x.hi_decimal(20)],
            "lambda0": word_string(self.lambda0.maps()),
            "interval": {
                "lower": [self.interval.0.lo_decimal(20), self.interval.0.hi_decimal(20)],
                "upper": [self.interval.1.lo_decimal(20), self.interval.1.hi_decimal(20)],
            },
            "delta_used": self.delta_used.to_string(),
            "endpoint_digits": self.endpoint_digits,
        })
    }
}

fn check_cover(params: &AffineParams, cert: &DeltaCertificate) -> Result<()> {
    if compare_beta(&params.beta1, &cert.beta1)? != std::cmp::Ordering::Equal {
        return Err(AffineError::NoDeltaCertificate(format!(
            "β₁ = {} (certificate is for {})",
            params.beta1, cert.beta1
        )));
    }
    for b in [&params.beta2, &params.beta3] {
        if !cert.covers_base(b)? {
            return Err(AffineError::NoDeltaCertificate(format!(
                "base {b} (certified radius {})",
                cert.delta_f64()
            )));
        }
    }
    Ok(())
}

/// π(λ⁰, words…) enclosure with the tail over all completions.
fn project_run(v: &Vertical, digits: &[i8]) -> Result<RInterval> {
    let w = DigitWord::new(Alphabet::PlusMinus, digits.to_vec())?;
    let p = betafibre_expansion::project_affine_iv(&w, &v.b2, &v.b3)?;
    Ok(p.completions)
}

/// Append words of direction `d` from the tracker's point until at least `n` digits are added.
fn run_words(
    tracker: &mut OrbitTracker,
    table: &PartitionTable,
    d: Direction,
    n: usize,
    out: &mut Vec<i8>,
) -> Result<()> {
    let start = out.len();
    while out.len() - start < n {
        let i = lookup(tracker, table, d)?;
        let w = table.table(d).words[i].maps();
        tracker.apply_word(w)?;
        out.extend_from_slice(w);
    }
    Ok(())
}

/// Certified interval in the fibre over x, for (β₂, β₃) covered by `cert`.
pub fn fibre_interval(params: &AffineParams, x: &BigRational, cert: &DeltaCertificate) -> Result<FibreCertificate> {
    check_cover(params, cert)?;
    let table = cert.table.clone();
    let base = &table.base;
    let xe = base.field.from_rational(x);
    if !base.in_open_domain(&xe)? {
        return Err(AffineError::Domain(format!("x = {x} is outside the open domain")));
    }
    let lambda0 = map_into_o_exact(base, &xe)?;
    let v = Vertical::new(params, BASE_PREC)?;
    let mut ends = Vec::with_capacity(2);
    for d in [Direction::ZeroHeavy, Direction::OneHeavy] {
        let mut tracker = OrbitTracker::new(base, &xe)?;
        tracker.apply_word(lambda0.maps())?;
        let mut digits = lambda0.maps().to_vec();
        run_words(&mut tracker, &table, d, ENDPOINT_DIGITS, &mut digits)?;
        ends.push(project_run(&v, &digits)?);
    }
    let (lo, hi) = (ends[0].clone(), ends[1].clone());
    if lo.cmp3(&hi) != betafibre_numerics::Cmp3::Less {
        return Err(AffineError::BoundaryUndecidable("fibre interval endpoints are not separated".into()));
    }
    Ok(FibreCertificate {
        params: params.clone(),
        x: RInterval::from_rational(x, BASE_PREC),
        lambda0,
        interval: (lo, hi),
        delta_used: cert.delta.clone(),
        endpoint_digits: ENDPOINT_DIGITS,
        x_exact: xe,
        table,
    })
}

/// Enclosure of L(z) or U(z), tightened one word at a time.
struct Tail<'a> {
    tracker: OrbitTracker,
    dir: Direction,
    table: &'a PartitionTable,
    vals: &'a WordValues,
    acc: RInterval,
    prod: RInterval,
    digits: usize,
}

impl<'a> Tail<'a> {
    fn new(tracker: OrbitTracker, dir: Direction, table: &'a PartitionTable, vals: &'a WordValues, v: &Vertical) -> Self {
        Tail { tracker, dir, table, vals, acc: v.zero(), prod: v.one(), digits: 0 }
    }

    fn enclosure(&self) -> RInterval {
        self.acc.add(&self.prod.mul(self.vals.hull(self.dir)))
    }

    fn advance(&mut self) -> Result<()> {
        let i = lookup(&mut self.tracker, self.table, self.dir)?;
        let (p, f) = self.vals.get(self.dir, i);
        self.acc = self.acc.add(&self.prod.mul(p));
        self.prod = self.prod.mul(f);
        let w = self.table.table(self.dir).words[i].maps();
        self.tracker.apply_word(w)?;
        self.digits += w.len();
        Ok(())
    }
}

/// Working precision for `n` digits: the normalized target expands by max(β₂, β₃) per digit.
pub fn fibre_precision(params: &AffineParams, n: usize) -> u32 {
    let (_, b2, b3) = params.to_f64();
    BASE_PREC + (n as f64 * b2.max(b3).log2()).ceil() as u32
}

/// A digit word λ (λ⁰ included, length ≥ n) with π_{β₁}(λ) → x and π_{β₂,β₃}(λ) → y.
///
/// At each step the lower sub-bracket (next word ω⁻¹) is taken when y is certified below its top
/// end; otherwise the upper one is taken when y is certified above its bottom end. The two
/// sub-brackets overlap, so one of these holds once the tail enclosures are tight enough.
/// `y` should carry about `fibre_precision(n)` bits.
pub fn point_in_fibre(cert: &FibreCertificate, y: &RInterval, n: usize) -> Result<MapWord> {
    let (lo, hi) = &cert.interval;
    if y.hi() < lo.lo() || y.lo() > hi.hi() {
        return Err(AffineError::Precondition("y is outside the certified fibre interval".into()));
    }
    let prec = fibre_precision(&cert.params, n).max(y.prec());
    let v = Vertical::new(&cert.params, prec)?;
    let table = &*cert.table;
    let vals = WordValues::new(table, &v);
    let mut tracker = OrbitTracker::new(&table.base, &cert.x_exact)?;
    tracker.apply_word(cert.lambda0.maps())?;
    let mut out = cert.lambda0.maps().to_vec();
    // y = π(λᵏ) + W(λᵏ)·t.
    let (p0, w0) = v.word(&out);
    let mut t = y.with_prec(prec).sub(&p0).div(&w0);
    while out.len() < n {
        let im = lookup(&mut tracker, table, Direction::ZeroHeavy)?;
        let ip = lookup(&mut tracker, table, Direction::OneHeavy)?;
        let (pm, wm) = vals.get(Direction::ZeroHeavy, im).clone();
        let (pp, wp) = vals.get(Direction::OneHeavy, ip).clone();
        let wm_word = table.zero_heavy.words[im].maps();
        let wp_word = table.one_heavy.words[ip].maps();
        let mut after_m = tracker.clone();
        after_m.apply_word(wm_word)?;
        let mut after_p = tracker.clone();
        after_p.apply_word(wp_word)?;
        // Top of the lower sub-bracket, and bottom of the upper one.
        let mut top = Tail::new(after_m, Direction::OneHeavy, table, &vals, &v);
        let mut bottom = Tail::new(after_p, Direction::ZeroHeavy, table, &vals, &v);
        let lower = loop {
            let s = pm.add(&wm.mul(&top.enclosure()));
            let l = pp.add(&wp.mul(&bottom.enclosure()));
            if t.hi() <= s.lo() {
                break true;
            }
            if t.lo() >= l.hi() {
                break false;
            }
            if top.digits > TAIL_CAP {
                return Err(AffineError::BoundaryUndecidable(format!(
                    "sub-bracket choice after {} digits; y needs more precision",
                    out.len()
                )));
            }
            top.advance()?;
            bottom.advance()?;
        };
        let (w, p, f) = if lower { (wm_word, &pm, &wm) } else { (wp_word, &pp, &wp) };
        tracker.apply_word(w)?;
        out.extend_from_slice(w);
        t = t.sub(p).div(f);
    }
    Ok(MapWord::from_digits(Alphabet::PlusMinus, &out)?)
}

/// `point_in_fibre` for a rational y, enclosed at the working precision.
pub fn point_in_fibre_rational(cert: &FibreCertificate, y: &BigRational, n: usize) -> Result<MapWord> {
    let prec = fibre_precision(&cert.params, n);
    point_in_fibre(cert, &RInterval::from_rational(y, prec), n)
}
