//! Certification of the vertical contraction radius δ for a base β₁ < φ.
//!
//! With u = 1/β₂ and v = 1/β₃, the projection of a finite {−1,1} word is a polynomial
//! in (u, v). For a head word a and a periodic tail b,
//!
//!   π(a, b^∞) = π(a) + u^{p_a} v^{q_a} π(b) / (1 − u^{p_b} v^{q_b}),
//!
//! where p counts −1 digits and q counts +1 digits. On u, v ∈ [1/(1+δ), 1] the denominator is
//! nonnegative, so the sign of π(a, b^∞) is the sign of
//!
//!   P(u, v) = π(a)(1 − u^{p_b} v^{q_b}) + u^{p_a} v^{q_a} π(b),
//!
//! which equals the digit sum of b at u = v = 1. P is certified on the whole box by monomial
//! bounds with quadtree subdivision.

use std::collections::BTreeMap;
use std::sync::Arc;

use betafibre_expansion::Alphabet;
use betafibre_numerics::{BetaValue, Dyadic, RInterval, Round};
use betafibre_synthesis::{build_partition_table, PartitionTable};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{AffineError, Result};

/// Boxes examined per inequality before giving up.
pub const MAX_BOXES: usize = 200_000;

/// Polynomial in (u, v) with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), i64>,
}

impl BiPoly {
    fn add_term(&mut self, i: u32, j: u32, c: i64) {
        let e = self.terms.entry((i, j)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(i, j));
        }
    }

    fn add(&mut self, o: &BiPoly) {
        for (&(i, j), &c) in &o.terms {
            self.add_term(i, j, c);
        }
    }

    fn shifted(&self, di: u32, dj: u32, scale: i64) -> BiPoly {
        let mut p = BiPoly::default();
        for (&(i, j), &c) in &self.terms {
            p.add_term(i + di, j + dj, c * scale);
        }
        p
    }

    /// π of a finite word: Σ ε_k u^{#−1 in first k} v^{#+1 in first k}.
    pub fn of_word(w: &[i8]) -> BiPoly {
        let mut p = BiPoly::default();
        let (mut i, mut j) = (0, 0);
        for &d in w {
            if d == 1 {
                j += 1;
            } else {
                i += 1;
            }
            p.add_term(i, j, d as i64);
        }
        p
    }

    /// P for head a and periodic tail b (see the module docs).
    pub fn periodic_pair(a: &[i8], b: &[i8]) -> BiPoly {
        let (pa, qa) = counts(a);
        let (pb, qb) = counts(b);
        let ha = BiPoly::of_word(a);
        let mut p = ha.clone();
        p.add(&ha.shifted(pb, qb, -1));
        p.add(&BiPoly::of_word(b).shifted(pa, qa, 1));
        p
    }

    /// π(w) − c for the threshold check; c = n/d is scaled out as d·π(w) − n.
    fn threshold(w: &[i8], c: &BigRational) -> (BiPoly, BigInt, BigInt) {
        (BiPoly::of_word(w), c.numer().clone(), c.denom().clone())
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    /// Exact value at rational (u, v).
    pub fn eval(&self, u: &BigRational, v: &BigRational) -> BigRational {
        let mut s = BigRational::zero();
        for (&(i, j), &c) in &self.terms {
            s += BigRational::from_integer(c.into()) * pow(u, i) * pow(v, j);
        }
        s
    }
}

fn pow(x: &BigRational, n: u32) -> BigRational {
    num_traits::pow(x.clone(), n as usize)
}

fn counts(w: &[i8]) -> (u32, u32) {
    let q = w.iter().filter(|&&d| d == 1).count() as u32;
    (w.len() as u32 - q, q)
}

/// Required sign of a certified quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    fn name(self) -> &'static str {
        match self {
            Sign::Negative => "negative",
            Sign::Positive => "positive",
        }
    }

    fn ok(self, x: &BigInt) -> bool {
        match self {
            Sign::Negative => x.is_negative(),
            Sign::Positive => x.is_positive(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// Subdivision budget exhausted without a decision.
    Undecided,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// Sign of π(head, tail^∞).
    Periodic,
    /// |π(head)| ≥ c with the sign of the head's digit sum.
    Threshold,
}

/// One line of the inequality transcript.
#[derive(Clone, Debug)]
pub struct PairCheck {
    pub kind: CheckKind,
    pub head: Vec<i8>,
    pub tail: Vec<i8>,
    pub required: Sign,
    /// Hull of the leaf enclosures of the normalized quantity (P, or π(head) − c).
    pub enclosure: (BigRational, BigRational),
    pub boxes: usize,
    pub verdict: Verdict,
    /// (β₂, β₃) at which the inequality fails.
    pub witness: Option<(BigRational, BigRational)>,
}

impl PairCheck {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "kind": match self.kind { CheckKind::Periodic => "periodic", CheckKind::Threshold => "threshold" },
            "head": word_string(&self.head),
            "tail": word_string(&self.tail),
            "required": self.required.name(),
            "enclosure": [rat_down(&self.enclosure.0), rat_up(&self.enclosure.1)],
            "boxes": self.boxes,
            "verdict": self.verdict.name(),
        });
        if let Some((b2, b3)) = &self.witness {
            v["witness"] = json!([b2.to_string(), b3.to_string()]);
        }
        v
    }
}

pub fn word_string(w: &[i8]) -> String {
    w.iter().map(|&d| if d == 1 { '+' } else { '-' }).collect()
}

pub(crate) fn rat_down(r: &BigRational) -> f64 {
    Dyadic::from_rational(r, 53, Round::Down).to_f64()
}

pub(crate) fn rat_up(r: &BigRational) -> f64 {
    Dyadic::from_rational(r, 53, Round::Up).to_f64()
}

/// Square box in (u, v) with integer corners over a common denominator.
#[derive(Clone, Debug)]
struct UvBox {
    ul: BigInt,
    uh: BigInt,
    vl: BigInt,
    vh: BigInt,
    den: BigInt,
}

impl UvBox {
    /// u, v ∈ [1/(1+δ), 1].
    fn root(delta: &BigRational) -> UvBox {
        let (p, q) = (delta.numer().clone(), delta.denom().clone());
        let den = &p + &q;
        UvBox { ul: q.clone(), uh: den.clone(), vl: q, vh: den.clone(), den }
    }

    fn children(&self) -> [UvBox; 4] {
        let two = |x: &BigInt| x * 2;
        let um = &self.ul + &self.uh;
        let vm = &self.vl + &self.vh;
        let den = two(&self.den);
        let us = [(two(&self.ul), um.clone()), (um, two(&self.uh))];
        let vs = [(two(&self.vl), vm.clone()), (vm, two(&self.vh))];
        let mk = |u: &(BigInt, BigInt), v: &(BigInt, BigInt)| UvBox {
            ul: u.0.clone(),
            uh: u.1.clone(),
            vl: v.0.clone(),
            vh: v.1.clone(),
            den: den.clone(),
        };
        [mk(&us[0], &vs[0]), mk(&us[0], &vs[1]), mk(&us[1], &vs[0]), mk(&us[1], &vs[1])]
    }

    fn corners(&self) -> [(BigRational, BigRational); 4] {
        let r = |n: &BigInt| BigRational::new(n.clone(), self.den.clone());
        [
            (r(&self.ul), r(&self.vl)),
            (r(&self.ul), r(&self.vh)),
            (r(&self.uh), r(&self.vl)),
            (r(&self.uh), r(&self.vh)),
        ]
    }

    fn center(&self) -> (BigRational, BigRational) {
        let d: BigInt = &self.den * 2u32;
        (BigRational::new(&self.ul + &self.uh, d.clone()), BigRational::new(&self.vl + &self.vh, d))
    }
}

/// A polynomial scaled by a positive constant and shifted: (scale·P − offset) in integer form.
struct Target<'a> {
    poly: &'a BiPoly,
    scale: BigInt,
    offset: BigInt,
    deg: u32,
}

impl Target<'_> {
    /// Numerators of the lower and upper bounds over the box, over den^deg.
    fn bounds(&self, b: &UvBox) -> (BigInt, BigInt) {
        let d = self.deg as usize;
        let powers = |x: &BigInt| {
            let mut v = Vec::with_capacity(d + 1);
            v.push(BigInt::one());
            for k in 0..d {
                let next = &v[k] * x;
                v.push(next);
            }
            v
        };
        let (ul, uh, vl, vh, dp) = (powers(&b.ul), powers(&b.uh), powers(&b.vl), powers(&b.vh), powers(&b.den));
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (&(i, j), &c) in &self.poly.terms {
            let (i, j) = (i as usize, j as usize);
            let rest = &dp[d - i - j];
            let small = &ul[i] * &vl[j] * rest;
            let large = &uh[i] * &vh[j] * rest;
            if c > 0 {
                lo += &small * c;
                hi += &large * c;
            } else {
                lo += &large * c;
                hi += &small * c;
            }
        }
        let shift = &self.offset * &dp[d];
        ((lo * &self.scale) - &shift, (hi * &self.scale) - shift)
    }

    fn value(&self, u: &BigRational, v: &BigRational) -> BigRational {
        self.poly.eval(u, v) * BigRational::from_integer(self.scale.clone())
            - BigRational::from_integer(self.offset.clone())
    }

    fn scaled(&self, n: BigInt, b: &UvBox) -> BigRational {
        BigRational::new(n, num_traits::pow(b.den.clone(), self.deg as usize) * &self.scale)
    }
}

struct BoxResult {
    verdict: Verdict,
    enclosure: (BigRational, BigRational),
    boxes: usize,
    witness: Option<(BigRational, BigRational)>,
}

fn sign_ok(x: &BigRational, s: Sign) -> bool {
    s.ok(&(x.numer() * x.denom().signum()))
}

/// Certify `sign(scale·P − offset) = s` on the box, subdividing on indecision.
fn check_box(t: &Target, root: UvBox, s: Sign, max_boxes: usize) -> BoxResult {
    let to_beta = |(u, v): (BigRational, BigRational)| (u.recip(), v.recip());
    for c in root.corners() {
        if !sign_ok(&t.value(&c.0, &c.1), s) {
            let (lo, hi) = t.bounds(&root);
            return BoxResult {
                verdict: Verdict::Fails,
                enclosure: (t.scaled(lo, &root), t.scaled(hi, &root)),
                boxes: 1,
                witness: Some(to_beta(c)),
            };
        }
    }
    let mut stack = vec![root];
    let mut boxes = 0usize;
    let mut hull: Option<(BigRational, BigRational)> = None;
    while let Some(b) = stack.pop() {
        boxes += 1;
        let (lo, hi) = t.bounds(&b);
        let certified = match s {
            Sign::Negative => hi.is_negative(),
            Sign::Positive => lo.is_positive(),
        };
        if certified {
            let (l, h) = (t.scaled(lo, &b), t.scaled(hi, &b));
            hull = Some(match hull {
                None => (l, h),
                Some((a, c)) => (a.min(l), c.max(h)),
            });
            continue;
        }
        let c = b.center();
        if !sign_ok(&t.value(&c.0, &c.1), s) {
            return BoxResult {
                verdict: Verdict::Fails,
                enclosure: (t.scaled(lo, &b), t.scaled(hi, &b)),
                boxes,
                witness: Some(to_beta(c)),
            };
        }
        if boxes >= max_boxes {
            return BoxResult {
                verdict: Verdict::Undecided,
                enclosure: (t.scaled(lo, &b), t.scaled(hi, &b)),
                boxes,
                witness: None,
            };
        }
        stack.extend(b.children());
    }
    let enclosure = hull.expect("at least one certified box");
    BoxResult { verdict: Verdict::Holds, enclosure, boxes, witness: None }
}

fn check_delta(delta: &BigRational) -> Result<()> {
    if delta.is_negative() {
        return Err(AffineError::Domain(format!("delta = {delta} must be nonnegative")));
    }
    if *delta > BigRational::one() {
        return Err(AffineError::Domain(format!("delta = {delta} puts β₂, β₃ above 2")));
    }
    Ok(())
}

fn digit_sum(w: &[i8]) -> i64 {
    w.iter().map(|&d| d as i64).sum()
}

/// Certify the sign of π_{β₂,β₃}(a, b^∞) for all β₂, β₃ ∈ [1, 1+δ]: the required sign is
/// the sign of the digit sum of b.
pub fn monotone_extreme_check(a: &[i8], b: &[i8], delta: &BigRational) -> Result<PairCheck> {
    monotone_extreme_check_capped(a, b, delta, MAX_BOXES)
}

pub fn monotone_extreme_check_capped(a: &[i8], b: &[i8], delta: &BigRational, max_boxes: usize) -> Result<PairCheck> {
    check_delta(delta)?;
    let required = match digit_sum(b) {
        0 => return Err(AffineError::Precondition("periodic tail has digit sum 0".into())),
        s if s < 0 => Sign::Negative,
        _ => Sign::Positive,
    };
    if b.is_empty() || a.iter().chain(b).any(|&d| d != 1 && d != -1) {
        return Err(AffineError::Precondition("words must be nonempty {-1,1} words".into()));
    }
    let poly = BiPoly::periodic_pair(a, b);
    let t = Target { deg: poly.degree(), poly: &poly, scale: BigInt::one(), offset: BigInt::zero() };
    let r = check_box(&t, UvBox::root(delta), required, max_boxes);
    if r.verdict == Verdict::Undecided {
        return Err(AffineError::BoxSubdivisionOverflow(max_boxes));
    }
    Ok(PairCheck {
        kind: CheckKind::Periodic,
        head: a.to_vec(),
        tail: b.to_vec(),
        required,
        enclosure: r.enclosure,
        boxes: r.boxes,
        verdict: r.verdict,
        witness: r.witness,
    })
}

/// π(w) ≥ c (one-heavy w) or π(w) ≤ −c (zero-heavy w) on the box.
fn threshold_check(w: &[i8], c: &BigRational, delta: &BigRational, max_boxes: usize) -> PairCheck {
    let (poly, n, d) = BiPoly::threshold(w, c);
    let (required, poly, offset) = if digit_sum(w) > 0 {
        (Sign::Positive, poly, n)
    } else {
        // −π(w) − c > 0.
        (Sign::Positive, poly.shifted(0, 0, -1), n)
    };
    let t = Target { deg: poly.degree(), poly: &poly, scale: d, offset };
    let r = check_box(&t, UvBox::root(delta), required, max_boxes);
    PairCheck {
        kind: CheckKind::Threshold,
        head: w.to_vec(),
        tail: Vec::new(),
        required,
        enclosure: r.enclosure,
        boxes: r.boxes,
        verdict: r.verdict,
        witness: r.witness,
    }
}

fn periodic_check(a: &[i8], b: &[i8], delta: &BigRational, max_boxes: usize) -> PairCheck {
    match monotone_extreme_check_capped(a, b, delta, max_boxes) {
        Ok(c) => c,
        Err(_) => PairCheck {
            kind: CheckKind::Periodic,
            head: a.to_vec(),
            tail: b.to_vec(),
            required: if digit_sum(b) < 0 { Sign::Negative } else { Sign::Positive },
            enclosure: (BigRational::zero(), BigRational::zero()),
            boxes: max_boxes,
            verdict: Verdict::Undecided,
            witness: None,
        },
    }
}

/// How δ is searched.
#[derive(Clone, Debug)]
pub enum DeltaSearch {
    /// δ = step, 2·step, … up to `max`, stopping at the first failure.
    Grid { step: BigRational, max: BigRational },
    /// Bisection on (0, hi] for a fixed number of probes.
    Bisection { hi: BigRational, iterations: u32 },
}

impl Default for DeltaSearch {
    fn default() -> DeltaSearch {
        DeltaSearch::Bisection { hi: BigRational::new(1.into(), 2.into()), iterations: 20 }
    }
}

/// A certified δ for β₁ with the full inequality transcript at that δ.
#[derive(Clone, Debug)]
pub struct DeltaCertificate {
    pub beta1: BetaValue,
    pub delta: BigRational,
    pub c_threshold: BigRational,
    /// A₋₁: the zero-heavy words of the {−1,1} table.
    pub zero_heavy_words: Vec<Vec<i8>>,
    /// A₁: the one-heavy words.
    pub one_heavy_words: Vec<Vec<i8>>,
    pub transcript: Vec<PairCheck>,
    /// Every probed δ and whether it was certified.
    pub probes: Vec<(BigRational, bool)>,
    pub table: Arc<PartitionTable>,
}

impl DeltaCertificate {
    pub fn delta_f64(&self) -> f64 {
        rat_down(&self.delta)
    }

    /// Whether β ≤ 1 + δ is certified.
    pub fn covers_base(&self, b: &BetaValue) -> Result<bool> {
        let top = BigRational::one() + &self.delta;
        if let Some(r) = b.exact_rational() {
            return Ok(r <= top);
        }
        let t = RInterval::from_rational(&top, 256);
        for bits in [64u32, 128, 256, 512] {
            let e = b.enclose_bits(bits).unwrap_or_else(|_| b.enclosure());
            if e.hi() <= t.lo() {
                return Ok(true);
            }
            if e.lo() > t.hi() {
                return Ok(false);
            }
        }
        Ok(false)
    }

    pub fn to_json(&self) -> Value {
        let words = |ws: &[Vec<i8>]| ws.iter().map(|w| word_string(w)).collect::<Vec<_>>();
        let enc = self.beta1.enclosure();
        json!({
            "schema_version": 1,
            "beta1": {
                "definition": self.beta1.spec(),
                "enclosure": [enc.lo_decimal(20), enc.hi_decimal(20)],
            },
            "delta": self.delta.to_string(),
            "delta_decimal": rat_down(&self.delta),
            "c_threshold": self.c_threshold.to_string(),
            "zero_heavy_words": words(&self.zero_heavy_words),
            "one_heavy_words": words(&self.one_heavy_words),
            "probes": self.probes.iter().map(|(d, ok)| json!({"delta": d.to_string(), "certified": ok})).collect::<Vec<_>>(),
            "transcript": self.transcript.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn unique_words(t: &betafibre_synthesis::DirectionTable) -> Vec<Vec<i8>> {
    let mut out: Vec<Vec<i8>> = Vec::new();
    for w in &t.words {
        if !out.iter().any(|o| o.as_slice() == w.maps()) {
            out.push(w.maps().to_vec());
        }
    }
    out
}

/// The finite system at one δ. With `full = false` the run stops at the first failure.
pub fn check_system(
    zero_heavy: &[Vec<i8>],
    one_heavy: &[Vec<i8>],
    delta: &BigRational,
    c_threshold: &BigRational,
    full: bool,
) -> Result<(bool, Vec<PairCheck>)> {
    check_delta(delta)?;
    let mut out = Vec::new();
    let mut ok = true;
    let push = |c: PairCheck, out: &mut Vec<PairCheck>| -> bool {
        let good = c.verdict == Verdict::Holds;
        out.push(c);
        good
    };
    let thresholds = one_heavy.iter().chain(zero_heavy);
    for w in thresholds {
        ok &= push(threshold_check(w, c_threshold, delta, MAX_BOXES), &mut out);
        if !ok && !full {
            return Ok((false, out));
        }
    }
    for (heads, tails) in [(one_heavy, zero_heavy), (zero_heavy, one_heavy)] {
        for a in heads {
            for b in tails {
                ok &= push(periodic_check(a, b, delta, MAX_BOXES), &mut out);
                if !ok && !full {
                    return Ok((false, out));
                }
            }
        }
    }
    Ok((ok, out))
}

/// Largest δ found by `search` for which the finite system holds on [1, 1+δ]².
pub fn certify_delta(beta1: &BetaValue, search: &DeltaSearch, c_threshold: &BigRational) -> Result<DeltaCertificate> {
    let table = build_partition_table(beta1, Alphabet::PlusMinus)?;
    certify_delta_with_table(Arc::new(table), search, c_threshold)
}

pub fn certify_delta_with_table(
    table: Arc<PartitionTable>,
    search: &DeltaSearch,
    c_threshold: &BigRational,
) -> Result<DeltaCertificate> {
    if table.alphabet != Alphabet::PlusMinus {
        return Err(AffineError::Precondition("delta certification needs the {-1,1} table".into()));
    }
    if !c_threshold.is_positive() || *c_threshold >= BigRational::one() {
        return Err(AffineError::Domain(format!("c_threshold = {c_threshold} must lie in (0, 1)")));
    }
    let zh = unique_words(&table.zero_heavy);
    let oh = unique_words(&table.one_heavy);
    if zh.is_empty() || oh.is_empty() {
        return Err(AffineError::Precondition("partition table has no words".into()));
    }
    let mut probes = Vec::new();
    let mut probe = |d: &BigRational| -> Result<bool> {
        let (ok, _) = check_system(&zh, &oh, d, c_threshold, false)?;
        probes.push((d.clone(), ok));
        Ok(ok)
    };
    let mut best: Option<BigRational> = None;
    match search {
        DeltaSearch::Grid { step, max } => {
            if !step.is_positive() {
                return Err(AffineError::Domain("grid step must be positive".into()));
            }
            let mut d = step.clone();
            while d <= *max && probe(&d)? {
                best = Some(d.clone());
                d += step;
            }
        }
        DeltaSearch::Bisection { hi, iterations } => {
            check_delta(hi)?;
            if probe(hi)? {
                best = Some(hi.clone());
            } else {
                let (mut lo, mut hi) = (BigRational::zero(), hi.clone());
                for _ in 0..*iterations {
                    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                    if probe(&mid)? {
                        best = Some(mid.clone());
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
        }
    }
    let delta = best.ok_or_else(|| AffineError::NoPositiveDelta(table.beta.to_string()))?;
    let (ok, transcript) = check_system(&zh, &oh, &delta, c_threshold, true)?;
    debug_assert!(ok);
    Ok(DeltaCertificate {
        beta1: table.beta.clone(),
        delta,
        c_threshold: c_threshold.clone(),
        zero_heavy_words: zh,
        one_heavy_words: oh,
        transcript,
        probes,
        table,
    })
}

/// f64 value of π(a, b^∞) at β₂ = β₃ = β; for reports only.
pub fn periodic_value_f64(a: &[i8], b: &[i8], beta2: f64, beta3: f64) -> f64 {
    let w = |x: &[i8]| {
        let (mut s, mut f) = (0.0, 1.0);
        for &d in x {
            f /= if d == 1 { beta3 } else { beta2 };
            s += d as f64 * f;
        }
        (s, f)
    };
    let (pa, wa) = w(a);
    let (pb, wb) = w(b);
    pa + wa * pb / (1.0 - wb)
}
