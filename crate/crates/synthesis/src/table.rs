//! Certified partition tables built by symbolic execution of the ω construction.

use std::cmp::Ordering;

use betafibre_expansion::{Alphabet, ExactBase, MapWord};
use betafibre_numerics::{BetaValue, Cmp3, Elem, RInterval};
use serde_json::{json, Value};

use crate::error::{Result, SynthesisError};
use crate::omega::{to_alphabet, zero_heavy, Direction, Thr, HARD_CAP};

pub const DEFAULT_CELL_CAP: usize = 10_000;
const BOUND_PREC: u32 = 128;

/// A cell endpoint: the exact value in Q(β) and an enclosure of it.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub exact: Elem,
    pub enclosure: RInterval,
}

/// Cells [bounds[i], bounds[i+1]] with word words[i]; adjacent cells share a boundary.
#[derive(Clone, Debug)]
pub struct DirectionTable {
    pub direction: Direction,
    pub bounds: Vec<Boundary>,
    pub words: Vec<MapWord>,
}

impl DirectionTable {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn cell(&self, i: usize) -> (&Boundary, &Boundary, &MapWord) {
        (&self.bounds[i], &self.bounds[i + 1], &self.words[i])
    }
}

#[derive(Clone, Debug)]
pub struct PartitionTable {
    pub beta: BetaValue,
    pub alphabet: Alphabet,
    pub base: ExactBase,
    pub zero_heavy: DirectionTable,
    pub one_heavy: DirectionTable,
    pub n_beta: usize,
}

enum Stop {
    Split(Elem),
    Fail(SynthesisError),
}

impl From<SynthesisError> for Stop {
    fn from(e: SynthesisError) -> Stop {
        Stop::Fail(e)
    }
}

impl From<betafibre_numerics::NumericsError> for Stop {
    fn from(e: betafibre_numerics::NumericsError) -> Stop {
        Stop::Fail(e.into())
    }
}

/// Run the construction on the whole cell. Each comparison is T_w(x) ≥ a for an
/// increasing affine T_w; it either has one outcome on the open cell or the cell is
/// split at the switching point.
fn cell_word(base: &ExactBase, lo: &Elem, hi: &Elem) -> std::result::Result<Vec<i8>, Stop> {
    let f = &base.field;
    let mut ge = |w: &[i8], t: Thr, _strict: bool| -> std::result::Result<bool, Stop> {
        let a = match t {
            Thr::OLo => &base.o_lo,
            Thr::CalILo => &base.ci_lo,
            Thr::SLo => &base.s_lo,
        };
        let vl = f.apply_word(lo, w);
        if f.cmp(&vl, a)? != Ordering::Less {
            return Ok(true);
        }
        let vh = f.apply_word(hi, w);
        if f.cmp(&vh, a)? != Ordering::Greater {
            return Ok(false);
        }
        let scale = f.pow(&f.gen(), w.len() as u32);
        let s = f.add(lo, &f.div(&f.sub(a, &vl), &scale)?);
        Err(Stop::Split(f.normalize(&s)))
    };
    let of = || Stop::Fail(SynthesisError::Domain(format!("no return word within {HARD_CAP} maps")));
    zero_heavy(&mut ge, &of)
}

fn subdivide(base: &ExactBase, cap: usize) -> Result<(Vec<Elem>, Vec<Vec<i8>>)> {
    let mut bounds = vec![base.o_lo.clone()];
    let mut words: Vec<Vec<i8>> = Vec::new();
    let mut stack = vec![(base.o_lo.clone(), base.o_hi.clone())];
    let mut produced = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        match cell_word(base, &lo, &hi) {
            Ok(w) => {
                produced += 1;
                if words.last() == Some(&w) {
                    *bounds.last_mut().expect("nonempty") = hi;
                } else {
                    words.push(w);
                    bounds.push(hi);
                }
            }
            Err(Stop::Split(s)) => {
                stack.push((s.clone(), hi));
                stack.push((lo, s));
            }
            Err(Stop::Fail(e)) => return Err(e),
        }
        if produced + stack.len() > cap {
            return Err(SynthesisError::SubdivisionOverflow { cap });
        }
    }
    Ok((bounds, words))
}

fn certify(base: &ExactBase, t: &DirectionTable) -> Result<()> {
    let f = &base.field;
    let first = &t.bounds[0].exact;
    let last = &t.bounds[t.bounds.len() - 1].exact;
    if f.cmp(first, &base.o_lo)? != Ordering::Equal || f.cmp(last, &base.o_hi)? != Ordering::Equal {
        return Err(SynthesisError::CertificationFailed("cells do not cover O".into()));
    }
    for i in 0..t.len() {
        let (lo, hi, w) = t.cell(i);
        let fail = |what: &str| {
            Err(SynthesisError::CertificationFailed(format!(
                "{} cell {} {}: {}",
                t.direction.name(),
                i,
                w,
                what
            )))
        };
        if f.cmp(&lo.exact, &hi.exact)? != Ordering::Less {
            return fail("empty cell");
        }
        if f.cmp(&f.apply_word(&lo.exact, w.maps()), &base.o_lo)? == Ordering::Less {
            return fail("image of the left end leaves O");
        }
        if f.cmp(&f.apply_word(&hi.exact, w.maps()), &base.o_hi)? == Ordering::Greater {
            return fail("image of the right end leaves O");
        }
        let (nl, nh) = (w.count_low(), w.count_high());
        let ok = match t.direction {
            Direction::ZeroHeavy => nl > nh,
            Direction::OneHeavy => nh > nl,
        };
        if !ok {
            return fail("digit imbalance has the wrong sign");
        }
    }
    Ok(())
}

pub fn build_partition_table(beta: &BetaValue, alphabet: Alphabet) -> Result<PartitionTable> {
    build_partition_table_with_cap(beta, alphabet, DEFAULT_CELL_CAP)
}

pub fn build_partition_table_with_cap(beta: &BetaValue, alphabet: Alphabet, cap: usize) -> Result<PartitionTable> {
    if !beta.is_algebraic() {
        return Err(SynthesisError::Domain("partition tables need an algebraic β".into()));
    }
    let zo = ExactBase::new(beta, Alphabet::ZeroOne)?;
    if !zo.below_golden()? {
        return Err(SynthesisError::Domain("partition tables need β < φ".into()));
    }
    let (bounds, words) = subdivide(&zo, cap)?;
    let base = ExactBase::with_field(zo.field.clone(), alphabet)?;
    let f = &zo.field;
    let to_coord = |e: &Elem| match alphabet {
        Alphabet::ZeroOne => e.clone(),
        Alphabet::PlusMinus => f.normalize(&zo.to_plus_minus(e)),
    };
    let mk = |e: Elem| -> Result<Boundary> {
        let enclosure = f.enclose(&e, BOUND_PREC)?;
        Ok(Boundary { exact: e, enclosure })
    };
    let zero_heavy = DirectionTable {
        direction: Direction::ZeroHeavy,
        bounds: bounds.iter().map(|b| mk(to_coord(b))).collect::<Result<_>>()?,
        words: words.iter().map(|w| to_alphabet(w, alphabet)).collect(),
    };
    // ω¹(x) is ω⁰ of the reflected point with the two maps exchanged.
    let one_heavy = DirectionTable {
        direction: Direction::OneHeavy,
        bounds: bounds.iter().rev().map(|b| mk(to_coord(&f.normalize(&zo.mirror(b))))).collect::<Result<_>>()?,
        words: words
            .iter()
            .rev()
            .map(|w| to_alphabet(&w.iter().map(|&d| 1 - d).collect::<Vec<_>>(), alphabet))
            .collect(),
    };
    certify(&base, &zero_heavy)?;
    certify(&base, &one_heavy)?;
    let n_beta = zero_heavy.max_len().max(one_heavy.max_len());
    Ok(PartitionTable { beta: beta.clone(), alphabet, base, zero_heavy, one_heavy, n_beta })
}

impl PartitionTable {
    pub fn table(&self, d: Direction) -> &DirectionTable {
        match d {
            Direction::ZeroHeavy => &self.zero_heavy,
            Direction::OneHeavy => &self.one_heavy,
        }
    }

    /// Index of the leftmost cell containing x (so a shared endpoint gets the left cell's word).
    pub fn locate(&self, d: Direction, x: &Elem, x_enc: Option<&RInterval>) -> Result<usize> {
        let f = &self.base.field;
        let owned;
        let enc = match x_enc {
            Some(e) => e,
            None => {
                owned = f.enclose(x, BOUND_PREC)?;
                &owned
            }
        };
        self.locate_by(d, enc, |b| Ok(f.cmp(x, b)?))
    }

    /// As `locate`, with exact comparisons supplied by `cmp` (x against a boundary) and
    /// only called when the enclosure cannot decide.
    pub fn locate_by<F>(&self, d: Direction, enc: &RInterval, mut cmp: F) -> Result<usize>
    where
        F: FnMut(&Elem) -> Result<Ordering>,
    {
        let t = self.table(d);
        // Ordering of x against a boundary, with Equal standing in for "not decided by the enclosure
        // and exactly equal".
        let mut order = |b: &Boundary| -> Result<Ordering> {
            Ok(match enc.cmp3(&b.enclosure) {
                Cmp3::Less => Ordering::Less,
                Cmp3::Greater => Ordering::Greater,
                Cmp3::Overlapping => cmp(&b.exact)?,
            })
        };
        let last = t.bounds.len() - 1;
        if order(&t.bounds[0])? == Ordering::Less || order(&t.bounds[last])? == Ordering::Greater {
            return Err(SynthesisError::Domain("point is outside O".into()));
        }
        let mut le = |b: &Boundary| -> Result<bool> { Ok(order(b)? != Ordering::Greater) };
        // First i with x ≤ bounds[i+1].
        let (mut lo, mut hi) = (0usize, t.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if le(&t.bounds[mid + 1])? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    pub fn lookup(&self, d: Direction, x: &Elem, x_enc: Option<&RInterval>) -> Result<&MapWord> {
        let i = self.locate(d, x, x_enc)?;
        Ok(&self.table(d).words[i])
    }

    pub fn to_json(&self) -> Value {
        let enc = self.beta.enclosure();
        let dir_json = |t: &DirectionTable, key: &str| -> Vec<Value> {
            (0..t.len())
                .map(|i| {
                    let (lo, hi, w) = t.cell(i);
                    json!({
                        "lo": lo.enclosure.mid_f64(),
                        "hi": hi.enclosure.mid_f64(),
                        key: w.compact(),
                    })
                })
                .collect()
        };
        json!({
            "schema_version": 1,
            "beta": {
                "definition": self.beta.spec(),
                "enclosure": [enc.lo_decimal(20), enc.hi_decimal(20)],
            },
            "alphabet": self.alphabet.name(),
            "cells": self.common_cells(),
            "omega0_cells": dir_json(&self.zero_heavy, "omega0"),
            "omega1_cells": dir_json(&self.one_heavy, "omega1"),
            "n_beta": self.n_beta,
        })
    }

    /// Common refinement of the two direction tables, with both words per cell.
    fn common_cells(&self) -> Vec<Value> {
        let f = &self.base.field;
        let (a, b) = (&self.zero_heavy, &self.one_heavy);
        let mut out = Vec::new();
        let (mut i, mut j) = (0usize, 0usize);
        let mut lo = &a.bounds[0];
        while i < a.len() && j < b.len() {
            let (ha, hb) = (&a.bounds[i + 1], &b.bounds[j + 1]);
            let ord = f.cmp(&ha.exact, &hb.exact).unwrap_or(Ordering::Equal);
            let hi = if ord == Ordering::Greater { hb } else { ha };
            out.push(json!({
                "lo": lo.enclosure.mid_f64(),
                "hi": hi.enclosure.mid_f64(),
                "omega0": a.words[i].compact(),
                "omega1": b.words[j].compact(),
            }));
            lo = hi;
            match ord {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }
}
