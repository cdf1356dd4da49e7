//! The ω⁰ construction, written once against an abstract comparison oracle.
//!
//! Everything here runs in {0,1} coordinates. The {−1,1} words are obtained by the
//! conjugacy x ↦ 2x − 1/(β−1), which sends T₀ to T₋₁ and fixes T₁.

use std::cmp::Ordering;

use betafibre_expansion::{Alphabet, CanonicalIntervals, ExactBase, MapWord};
use num_rational::BigRational;
use betafibre_numerics::{BetaValue, Cmp3, Elem, RInterval, DEFAULT_PREC};

use crate::error::{Result, SynthesisError};

/// Longest word the construction may produce before giving up.
pub const HARD_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// ω⁰ (or ω⁻¹): more low digits than T₁.
    ZeroHeavy,
    /// ω¹: more T₁ than low digits.
    OneHeavy,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::ZeroHeavy => "zero-heavy",
            Direction::OneHeavy => "one-heavy",
        }
    }
}

/// Thresholds the construction compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Thr {
    /// Left endpoint of O.
    OLo,
    /// Left endpoint of 𝓘.
    CalILo,
    /// 1/β, the left endpoint of S.
    SLo,
}

/// ge(w, thr, strict) answers T_w(x) ≥ thr (or > when strict).
pub(crate) fn zero_heavy<E, F>(ge: &mut F, overflow: &dyn Fn() -> E) -> std::result::Result<Vec<i8>, E>
where
    F: FnMut(&[i8], Thr, bool) -> std::result::Result<bool, E>,
{
    if ge(&[1], Thr::CalILo, false)? {
        return case_two(ge, HARD_CAP)?.ok_or_else(overflow);
    }
    let w1 = case_one(ge, Vec::new(), HARD_CAP)?.ok_or_else(overflow)?;
    match case_two(ge, w1.len())? {
        Some(w2) if w2.len() <= w1.len() => Ok(w2),
        _ => Ok(w1),
    }
}

/// Apply T₀ until the orbit re-enters O; returns the run length.
fn run_zeros<E, F>(ge: &mut F, w: &mut Vec<i8>, budget: usize) -> std::result::Result<Option<usize>, E>
where
    F: FnMut(&[i8], Thr, bool) -> std::result::Result<bool, E>,
{
    let mut i = 0;
    while !ge(w, Thr::OLo, false)? {
        w.push(0);
        i += 1;
        if w.len() > budget {
            return Ok(None);
        }
    }
    Ok(Some(i))
}

/// Blocks (T₁, T₀^i) until a run with i > 1.
fn case_one<E, F>(ge: &mut F, mut w: Vec<i8>, budget: usize) -> std::result::Result<Option<Vec<i8>>, E>
where
    F: FnMut(&[i8], Thr, bool) -> std::result::Result<bool, E>,
{
    loop {
        w.push(1);
        if w.len() > budget {
            return Ok(None);
        }
        match run_zeros(ge, &mut w, budget)? {
            None => return Ok(None),
            Some(i) if i > 1 => return Ok(Some(w)),
            Some(_) => {}
        }
    }
}

/// (T₁, T₁, T₀^i); done if i > 2, otherwise continue as in Case 1.
fn case_two<E, F>(ge: &mut F, budget: usize) -> std::result::Result<Option<Vec<i8>>, E>
where
    F: FnMut(&[i8], Thr, bool) -> std::result::Result<bool, E>,
{
    if !ge(&[1], Thr::SLo, true)? {
        return Ok(None);
    }
    let mut w = vec![1, 1];
    match run_zeros(ge, &mut w, budget)? {
        None => Ok(None),
        Some(i) if i > 2 => Ok(Some(w)),
        Some(_) => case_one(ge, w, budget),
    }
}

/// {0,1} word to the requested alphabet.
pub(crate) fn to_alphabet(w: &[i8], alphabet: Alphabet) -> MapWord {
    let ds: Vec<i8> = w.iter().map(|&d| if d == 0 { alphabet.low() } else { 1 }).collect();
    MapWord::from_digits(alphabet, &ds).expect("digits come from the alphabet")
}

fn swap01(w: &[i8]) -> Vec<i8> {
    w.iter().map(|&d| 1 - d).collect()
}

fn threshold<'a>(base: &'a ExactBase, t: Thr) -> &'a Elem {
    match t {
        Thr::OLo => &base.o_lo,
        Thr::CalILo => &base.ci_lo,
        Thr::SLo => &base.s_lo,
    }
}

fn overflow() -> SynthesisError {
    SynthesisError::Domain(format!("no return word within {HARD_CAP} maps"))
}

fn check_base(beta: &BetaValue) -> Result<ExactBase> {
    if !beta.is_algebraic() {
        return Err(SynthesisError::Domain("word synthesis needs an algebraic β".into()));
    }
    let base = ExactBase::new(beta, Alphabet::ZeroOne)?;
    if !base.below_golden()? {
        return Err(SynthesisError::Domain("word synthesis needs β < φ".into()));
    }
    Ok(base)
}

/// ω⁰ for an exact point x ∈ O given in {0,1} coordinates of `base`.
pub fn zero_heavy_exact(base: &ExactBase, x: &Elem) -> Result<Vec<i8>> {
    let f = &base.field;
    let mut ge = |w: &[i8], t: Thr, strict: bool| -> Result<bool> {
        let v = f.apply_word(x, w);
        let o = f.cmp(&v, threshold(base, t))?;
        Ok(if strict { o == Ordering::Greater } else { o != Ordering::Less })
    };
    zero_heavy(&mut ge, &overflow)
}

/// Synthesize ω⁰/ω⁻¹ or ω¹ for an exact point of Q(β) given in the coordinates of `alphabet`.
pub fn synthesize_omega_exact(base_in: &ExactBase, x: &Elem, direction: Direction) -> Result<MapWord> {
    let zo = ExactBase::with_field(base_in.field.clone(), Alphabet::ZeroOne)?;
    if !base_in.in_o(x)? {
        return Err(SynthesisError::Domain("x is not in O".into()));
    }
    let f = &zo.field;
    // Back to {0,1} coordinates: x = (x̃ + 1/(β−1))/2.
    let x01 = match base_in.alphabet {
        Alphabet::ZeroOne => x.clone(),
        Alphabet::PlusMinus => f.mul_rational(&f.add(x, &zo.fix_high), &BigRational::new(1.into(), 2.into())),
    };
    let w = match direction {
        Direction::ZeroHeavy => zero_heavy_exact(&zo, &x01)?,
        Direction::OneHeavy => swap01(&zero_heavy_exact(&zo, &zo.mirror(&x01))?),
    };
    Ok(to_alphabet(&w, base_in.alphabet))
}

/// Synthesize the return word for an enclosure x ⊂ O (or Õ for the {−1,1} alphabet).
/// A point enclosure that hits a switching threshold falls back to exact arithmetic.
pub fn synthesize_omega(x: &RInterval, beta: &BetaValue, direction: Direction, alphabet: Alphabet) -> Result<MapWord> {
    let base = check_base(beta)?;
    match synthesize_omega_iv(x, beta, direction, alphabet) {
        Err(e) if e.is_undecidable() && x.is_point() => {
            let r = x.lo_fin().expect("finite point").to_rational();
            let base = ExactBase::with_field(base.field.clone(), alphabet)?;
            let e = base.field.from_rational(&r);
            synthesize_omega_exact(&base, &e, direction)
        }
        other => other,
    }
}

fn synthesize_omega_iv(x: &RInterval, beta: &BetaValue, direction: Direction, alphabet: Alphabet) -> Result<MapWord> {
    let prec = x.prec().max(DEFAULT_PREC);
    let ci = CanonicalIntervals::new(beta, Alphabet::ZeroOne)?;
    let ci = if ci.o.0.prec() >= prec { ci } else { ExactBase::new(beta, Alphabet::ZeroOne)?.enclosures(prec)? };
    let b = beta.enclose_bits(prec)?.with_prec(prec);
    let c = ci.i.1.clone();
    // Work in {0,1} coordinates.
    let mut x01 = match alphabet {
        Alphabet::ZeroOne => x.with_prec(prec),
        Alphabet::PlusMinus => x.with_prec(prec).add(&c).mul(&RInterval::from_f64(0.5, prec)),
    };
    let inside = ci.o.0.hi() <= x01.lo() && x01.hi() <= ci.o.1.lo();
    if !inside {
        if x01.cmp3(&ci.o.0) == Cmp3::Less || x01.cmp3(&ci.o.1) == Cmp3::Greater {
            return Err(SynthesisError::Domain("x is not in O".into()));
        }
        // A point enclosure on an endpoint of O is still admissible; anything wider is not decidable.
        if x01.width_f64() > 1e-30 {
            return Err(SynthesisError::BoundaryUndecidable("x straddles an endpoint of O".into()));
        }
    }
    if direction == Direction::OneHeavy {
        x01 = c.sub(&x01);
    }
    let mut ge = |w: &[i8], t: Thr, _strict: bool| -> Result<bool> {
        let mut v = x01.clone();
        for &d in w {
            v = b.mul(&v).add_int(-(d as i64));
        }
        let a = match t {
            Thr::OLo => &ci.o.0,
            Thr::CalILo => &ci.cal_i.0,
            Thr::SLo => &ci.s.0,
        };
        match v.cmp3(a) {
            Cmp3::Greater => Ok(true),
            Cmp3::Less => Ok(false),
            Cmp3::Overlapping => Err(SynthesisError::BoundaryUndecidable(format!(
                "orbit point {} overlaps a switching threshold",
                v.to_string_digits(12)
            ))),
        }
    };
    let w = zero_heavy(&mut ge, &overflow)?;
    let w = if direction == Direction::OneHeavy { swap01(&w) } else { w };
    Ok(to_alphabet(&w, alphabet))
}
