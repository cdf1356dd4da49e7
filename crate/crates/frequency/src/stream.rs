//! Digit streams with per-block certificates.

use std::cmp::Ordering;
use std::io::Write;

use betafibre_expansion::{Alphabet, ExactBase, MapWord, OrbitTracker};
use betafibre_numerics::{BetaValue, Elem, RInterval};
use betafibre_synthesis::{Direction, PartitionTable};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{FrequencyError, Result};

const ENDPOINT_PREC: u32 = 192;

/// Which generator produced a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Frequency,
    Accumulation,
    SimplyNormal,
    Hybrid,
    SlowGrowth,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Frequency => "freq",
            GeneratorKind::Accumulation => "accum",
            GeneratorKind::SimplyNormal => "normal",
            GeneratorKind::Hybrid => "hybrid",
            GeneratorKind::SlowGrowth => "slowgrowth",
        }
    }
}

/// Certificate recorded at the end of a block.
///
/// `count0`/`count1` count the low and high digit over everything after the initial block λ⁰.
/// `value` is the certified quantity and `bound` its proven bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    /// Digits emitted so far, λ⁰ included.
    pub checkpoint: u64,
    pub count0: u64,
    pub count1: u64,
    pub value: f64,
    pub bound: f64,
    /// Accumulation runs: the target this record certifies.
    pub target: Option<BigRational>,
}

impl Checkpoint {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "checkpoint": self.checkpoint,
            "count0": self.count0,
            "count1": self.count1,
            "bound": self.bound,
            "value": self.value,
        });
        if let Some(t) = &self.target {
            v["target"] = json!(t.to_string());
        }
        v
    }
}

/// Orbit state shared by all generators.
pub(crate) struct Core {
    pub base: ExactBase,
    pub tracker: OrbitTracker,
    o_enc: (RInterval, RInterval),
    pub digits: Vec<i8>,
    pub lambda0_len: usize,
    pub low: u64,
    pub high: u64,
}

impl Core {
    pub fn new(base: ExactBase, x: &Elem) -> Result<Core> {
        let lambda0 = betafibre_expansion::map_into_o_exact(&base, x)?;
        let mut tracker = OrbitTracker::new(&base, x)?;
        tracker.apply_word(lambda0.maps())?;
        let f = &base.field;
        let o_enc = (f.enclose(&base.o_lo, ENDPOINT_PREC)?, f.enclose(&base.o_hi, ENDPOINT_PREC)?);
        Ok(Core {
            base,
            tracker,
            o_enc,
            digits: lambda0.maps().to_vec(),
            lambda0_len: lambda0.len(),
            low: 0,
            high: 0,
        })
    }

    /// Length of the stream after λ⁰.
    pub fn len(&self) -> u64 {
        self.low + self.high
    }

    pub fn push(&mut self, w: &[i8]) -> Result<()> {
        self.tracker.apply_word(w)?;
        let lo = self.base.alphabet.low();
        for &d in w {
            if d == lo {
                self.low += 1;
            } else {
                self.high += 1;
            }
        }
        self.digits.extend_from_slice(w);
        Ok(())
    }

    pub fn cmp_point(&mut self, e: &Elem, enc: &RInterval) -> Result<Ordering> {
        Ok(self.tracker.cmp_with(e, enc)?)
    }

    pub fn below_o(&mut self) -> Result<bool> {
        let (lo, enc) = (self.base.o_lo.clone(), self.o_enc.0.clone());
        Ok(self.cmp_point(&lo, &enc)? == Ordering::Less)
    }

    pub fn above_o(&mut self) -> Result<bool> {
        let (hi, enc) = (self.base.o_hi.clone(), self.o_enc.1.clone());
        Ok(self.cmp_point(&hi, &enc)? == Ordering::Greater)
    }

    pub fn check_in_o(&mut self) -> Result<()> {
        if self.below_o()? || self.above_o()? {
            return Err(FrequencyError::CertificateViolation("orbit left O at a checkpoint".into()));
        }
        Ok(())
    }

    /// Return word for the current point from the table.
    pub fn lookup(&mut self, table: &PartitionTable, d: Direction) -> Result<MapWord> {
        let enc = self.tracker.enclosure();
        let tracker = &mut self.tracker;
        let i = table.locate_by(d, &enc, |b| Ok(tracker.cmp_exact(b)?))?;
        Ok(table.table(d).words[i].clone())
    }
}

/// One step of a generator: append a block to the core, return its certificate.
pub(crate) trait Rule: Send {
    fn step(&mut self, core: &mut Core) -> Result<Checkpoint>;
}

/// A deterministic digit stream with checkpoint certificates.
pub struct ExpansionStream {
    kind: GeneratorKind,
    beta: BetaValue,
    alphabet: Alphabet,
    x: RInterval,
    core: Core,
    rule: Box<dyn Rule>,
    checkpoints: Vec<Checkpoint>,
    cursor: usize,
}

impl ExpansionStream {
    pub(crate) fn new(kind: GeneratorKind, core: Core, x: &Elem, rule: Box<dyn Rule>) -> Result<ExpansionStream> {
        let beta = core.base.beta().clone();
        let alphabet = core.base.alphabet;
        let x = core.base.field.enclose(x, ENDPOINT_PREC)?;
        Ok(ExpansionStream { kind, beta, alphabet, x, core, rule, checkpoints: Vec::new(), cursor: 0 })
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn beta(&self) -> &BetaValue {
        &self.beta
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn x(&self) -> &RInterval {
        &self.x
    }

    /// Length of the initial block λ⁰.
    pub fn lambda0_len(&self) -> usize {
        self.core.lambda0_len
    }

    /// Generate blocks until at least `n` digits exist.
    pub fn generate(&mut self, n: usize) -> Result<()> {
        while self.core.digits.len() < n {
            let cp = self.rule.step(&mut self.core)?;
            self.checkpoints.push(cp);
        }
        Ok(())
    }

    /// All digits generated so far (possibly more than requested).
    pub fn digits(&self) -> &[i8] {
        &self.core.digits
    }

    /// The first `n` digits.
    pub fn take(&mut self, n: usize) -> Result<Vec<i8>> {
        self.generate(n)?;
        Ok(self.core.digits[..n].to_vec())
    }

    pub fn next_digit(&mut self) -> Result<i8> {
        self.generate(self.cursor + 1)?;
        let d = self.core.digits[self.cursor];
        self.cursor += 1;
        Ok(d)
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    /// One ASCII digit per byte, newline every 80 digits.
    pub fn write_digits<W: Write>(&self, n: usize, out: &mut W) -> Result<()> {
        let n = n.min(self.core.digits.len());
        for chunk in self.core.digits[..n].chunks(80) {
            let line: String = chunk.iter().map(|&d| digit_char(self.alphabet, d)).collect();
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Certificates as JSON lines, up to digit `n`.
    pub fn write_certificates<W: Write>(&self, n: usize, out: &mut W) -> Result<()> {
        for c in self.checkpoints.iter().take_while(|c| c.checkpoint as usize <= n) {
            writeln!(out, "{}", c.to_json())?;
        }
        Ok(())
    }
}

pub fn digit_char(alphabet: Alphabet, d: i8) -> char {
    match (alphabet, d) {
        (Alphabet::PlusMinus, 1) => '+',
        (Alphabet::PlusMinus, _) => '-',
        (_, 0) => '0',
        _ => '1',
    }
}
