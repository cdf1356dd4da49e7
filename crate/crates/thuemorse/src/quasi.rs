//! Quasi-greedy expansions of 1 and the lexicographic characterizations.

use std::cmp::Ordering;

use betafibre_numerics::{BetaValue, Cmp3, Field, RInterval, PREC_CAP};

use crate::error::{Result, ThueMorseError};

/// Prefix of α(β): emit 1 iff β·r > 1 strictly, starting from r = 1. The strict test
/// keeps the remainder away from 0, which is what makes the expansion infinite.
pub fn quasi_greedy(beta: &BetaValue, length: usize) -> Result<Vec<u8>> {
    if beta.is_algebraic() {
        let f = Field::new(beta)?;
        let one = f.one();
        let mut r = f.one();
        let mut out = Vec::with_capacity(length);
        for _ in 0..length {
            let t = f.normalize(&f.apply(&r, 0));
            if f.cmp(&t, &one)? == Ordering::Greater {
                out.push(1);
                r = f.add_int(&t, -1);
            } else {
                out.push(0);
                r = t;
            }
        }
        return Ok(out);
    }
    let mut prec = 96 + length as u32;
    loop {
        match quasi_greedy_iv(beta, length, prec)? {
            Some(v) => return Ok(v),
            None if prec < PREC_CAP.max(4 * length as u32) => prec *= 2,
            None => {
                return Err(ThueMorseError::BoundaryUndecidable(
                    "quasi-greedy remainder overlaps 1/β".into(),
                ))
            }
        }
    }
}

fn quasi_greedy_iv(beta: &BetaValue, length: usize, prec: u32) -> Result<Option<Vec<u8>>> {
    let b = beta.enclose_bits(prec)?.with_prec(prec);
    let one = RInterval::from_int(1, prec);
    let mut r = one.clone();
    let mut out = Vec::with_capacity(length);
    for _ in 0..length {
        let t = b.mul(&r);
        match t.cmp3(&one) {
            Cmp3::Greater => {
                out.push(1);
                r = t.add_int(-1);
            }
            Cmp3::Less => {
                out.push(0);
                r = t;
            }
            Cmp3::Overlapping => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// (α_{n+i}) ⪯ (α_i) whenever α_n = 0, checked on the available prefix.
pub fn satisfies_lexbound(alpha: &[u8]) -> bool {
    for n in 1..alpha.len() {
        if alpha[n - 1] == 0 {
            let tail = &alpha[n..];
            if tail > &alpha[..tail.len()] {
                return false;
            }
        }
    }
    true
}

/// Finite-prefix form of the attractor characterization: every suffix s of w satisfies
/// ᾱ[..|s|] ⪯ s ⪯ α[..|s|]. `alpha` must be at least as long as w.
pub fn lex_window_prefix(w: &[u8], alpha: &[u8]) -> bool {
    assert!(alpha.len() >= w.len(), "alpha prefix too short");
    let abar: Vec<u8> = alpha.iter().map(|b| 1 - b).collect();
    (0..w.len()).all(|n| {
        let s = &w[n..];
        s <= &alpha[..s.len()] && s >= &abar[..s.len()]
    })
}

/// Lexicographic order on equal-length prefixes.
pub fn lex_cmp(a: &[u8], b: &[u8]) -> Ordering {
    let k = a.len().min(b.len());
    a[..k].cmp(&b[..k])
}
