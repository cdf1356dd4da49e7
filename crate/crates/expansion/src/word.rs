//! Digits, map words and digit words over the two alphabets.

use std::fmt;

use crate::error::{ExpansionError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Alphabet {
    /// Digits {0, 1}, maps T₀ and T₁.
    ZeroOne,
    /// Digits {−1, 1}, maps T₋₁ and T₁.
    PlusMinus,
}

impl Alphabet {
    /// The digit other than 1.
    pub fn low(self) -> i8 {
        match self {
            Alphabet::ZeroOne => 0,
            Alphabet::PlusMinus => -1,
        }
    }

    pub fn high(self) -> i8 {
        1
    }

    pub fn admits(self, d: i8) -> bool {
        d == 1 || d == self.low()
    }

    /// Byte used in digit files.
    pub fn symbol(self, d: i8) -> char {
        match (self, d) {
            (Alphabet::ZeroOne, 0) => '0',
            (Alphabet::ZeroOne, _) => '1',
            (Alphabet::PlusMinus, -1) => '-',
            (Alphabet::PlusMinus, _) => '+',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::ZeroOne => "01",
            Alphabet::PlusMinus => "pm",
        }
    }

    pub fn parse(s: &str) -> Result<Alphabet> {
        match s {
            "01" | "zero-one" | "ZeroOne" => Ok(Alphabet::ZeroOne),
            "pm" | "plus-minus" | "PlusMinus" => Ok(Alphabet::PlusMinus),
            _ => Err(ExpansionError::Domain(format!("unknown alphabet '{s}'"))),
        }
    }

    /// Swap the two digits (the mirror symmetry of the maps).
    pub fn swap(self, d: i8) -> i8 {
        if d == 1 {
            self.low()
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Digit {
    value: i8,
    alphabet: Alphabet,
}

impl Digit {
    pub fn new(value: i8, alphabet: Alphabet) -> Result<Digit> {
        if !alphabet.admits(value) {
            return Err(ExpansionError::Domain(format!("digit {value} not in alphabet {}", alphabet.name())));
        }
        Ok(Digit { value, alphabet })
    }

    pub fn value(self) -> i8 {
        self.value
    }

    pub fn alphabet(self) -> Alphabet {
        self.alphabet
    }
}

/// A finite word of maps T_d; `maps[i] = d` stands for T_d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MapWord {
    alphabet: Alphabet,
    maps: Vec<i8>,
    n_low: usize,
    n_high: usize,
}

impl MapWord {
    pub fn empty(alphabet: Alphabet) -> MapWord {
        MapWord { alphabet, maps: Vec::new(), n_low: 0, n_high: 0 }
    }

    pub fn from_digits(alphabet: Alphabet, maps: &[i8]) -> Result<MapWord> {
        let mut w = MapWord::empty(alphabet);
        w.extend(maps)?;
        Ok(w)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn maps(&self) -> &[i8] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn push(&mut self, d: i8) -> Result<()> {
        if !self.alphabet.admits(d) {
            return Err(ExpansionError::MixedAlphabet(format!(
                "map T_{d} in a {} word",
                self.alphabet.name()
            )));
        }
        if d == 1 {
            self.n_high += 1;
        } else {
            self.n_low += 1;
        }
        self.maps.push(d);
        Ok(())
    }

    pub fn extend(&mut self, ds: &[i8]) -> Result<()> {
        for &d in ds {
            self.push(d)?;
        }
        Ok(())
    }

    pub fn concat(&mut self, o: &MapWord) -> Result<()> {
        if o.alphabet != self.alphabet {
            return Err(ExpansionError::MixedAlphabet("concatenating words over different alphabets".into()));
        }
        self.maps.extend_from_slice(&o.maps);
        self.n_low += o.n_low;
        self.n_high += o.n_high;
        Ok(())
    }

    /// |w|_d for a digit of the alphabet.
    pub fn count(&self, d: i8) -> usize {
        if d == 1 {
            self.n_high
        } else if d == self.alphabet.low() {
            self.n_low
        } else {
            0
        }
    }

    pub fn count_low(&self) -> usize {
        self.n_low
    }

    pub fn count_high(&self) -> usize {
        self.n_high
    }

    /// Recount from scratch; equals the maintained counts.
    pub fn recount(&self) -> (usize, usize) {
        let hi = self.maps.iter().filter(|&&d| d == 1).count();
        (self.maps.len() - hi, hi)
    }

    /// Digit swap T_low ↔ T_1.
    pub fn swapped(&self) -> MapWord {
        MapWord {
            alphabet: self.alphabet,
            maps: self.maps.iter().map(|&d| self.alphabet.swap(d)).collect(),
            n_low: self.n_high,
            n_high: self.n_low,
        }
    }

    /// The bijection B: (T_{ε_i}) ↦ (ε_i).
    pub fn to_digit_word(&self) -> DigitWord {
        DigitWord { alphabet: self.alphabet, digits: self.maps.clone() }
    }

    /// Comma-separated digits, e.g. "1,0,0,0".
    pub fn compact(&self) -> String {
        self.maps.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for MapWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.maps.iter().map(|d| format!("T{d}")).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finite digit word; B⁻¹ turns it back into a map word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitWord {
    alphabet: Alphabet,
    digits: Vec<i8>,
}

impl DigitWord {
    pub fn new(alphabet: Alphabet, digits: Vec<i8>) -> Result<DigitWord> {
        if let Some(&d) = digits.iter().find(|&&d| !alphabet.admits(d)) {
            return Err(ExpansionError::MixedAlphabet(format!("digit {d} in a {} word", alphabet.name())));
        }
        Ok(DigitWord { alphabet, digits })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn digits(&self) -> &[i8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn to_map_word(&self) -> MapWord {
        MapWord::from_digits(self.alphabet, &self.digits).expect("digits were validated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_mixing() {
        let mut w = MapWord::from_digits(Alphabet::ZeroOne, &[1, 0, 0, 0]).unwrap();
        assert_eq!((w.count(0), w.count(1)), (3, 1));
        assert_eq!(w.recount(), (3, 1));
        assert!(w.push(-1).is_err());
        assert!(Digit::new(-1, Alphabet::ZeroOne).is_err());
        assert!(Digit::new(-1, Alphabet::PlusMinus).is_ok());
        let s = w.swapped();
        assert_eq!(s.maps(), &[0, 1, 1, 1]);
        assert_eq!(s.to_digit_word().to_map_word(), s);
        assert_eq!(w.compact(), "1,0,0,0");
    }
}
