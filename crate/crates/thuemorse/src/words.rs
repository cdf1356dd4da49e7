//! τⁿ, τ̄ⁿ, κⁿ and υⁿ. τ is indexed from 0 (τ₀ = 0); υⁿ is indexed from 1.

use betafibre_expansion::{Alphabet, MapWord};

/// τ_i: parity of the binary digit sum of i.
pub fn tau(i: u64) -> u8 {
    (i.count_ones() & 1) as u8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThueMorseWord {
    pub level: u32,
    pub bits: Vec<u8>,
}

impl ThueMorseWord {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn complement(&self) -> Vec<u8> {
        self.bits.iter().map(|b| 1 - b).collect()
    }

    pub fn count(&self, b: u8) -> usize {
        self.bits.iter().filter(|&&x| x == b).count()
    }

    pub fn as_string(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }
}

/// τⁿ by the doubling τ^{k+1} = τ^k τ̄^k.
pub fn thue_morse(n: u32) -> ThueMorseWord {
    let mut bits = vec![0u8];
    for _ in 0..n {
        let c: Vec<u8> = bits.iter().map(|b| 1 - b).collect();
        bits.extend(c);
    }
    ThueMorseWord { level: n, bits }
}

/// κⁿ = (T_{τ₀}, …, T_{τ_{2ⁿ−1}}).
pub fn kappa(n: u32) -> MapWord {
    let d: Vec<i8> = thue_morse(n).bits.iter().map(|&b| b as i8).collect();
    MapWord::from_digits(Alphabet::ZeroOne, &d).expect("binary digits")
}

/// κ̄ⁿ, with T₀ and T₁ exchanged.
pub fn kappa_bar(n: u32) -> MapWord {
    kappa(n).swapped()
}

/// One period of υⁿ = (τ₁, …, τ_{2ⁿ−1}, 0)^∞.
pub fn upsilon_period(n: u32) -> Vec<u8> {
    let len = 1u64 << n;
    let mut p: Vec<u8> = (1..len).map(tau).collect();
    p.push(0);
    p
}
