//! Binary floating values `mant * 2^exp` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// Exact dyadic rational. Normalized so that the mantissa is odd (or zero with exp 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn bits(m: &BigInt) -> i64 {
    m.bits() as i64
}

fn shr_dir(m: &BigInt, s: u64, dir: Round) -> BigInt {
    // BigInt >> rounds toward -inf.
    match dir {
        Round::Down => m >> s,
        Round::Up => -((-m) >> s),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Dyadic {
        Dyadic::new(v.into(), 0)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(v: f64) -> Dyadic {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let b = v.to_bits();
        let sign = if b >> 63 == 1 { -1 } else { 1 };
        let e = ((b >> 52) & 0x7ff) as i64;
        let f = b & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 { (f, -1074) } else { (f | (1u64 << 52), e - 1075) };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Position just above the leading bit: |x| < 2^top.
    pub fn top(&self) -> i64 {
        bits(&self.mant) + self.exp
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn ldexp(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest-ish f64 (truncating); for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits(&self.mant);
        let keep = 60.min(b);
        let m = (&self.mant >> (b - keep) as u64).to_f64().unwrap_or(0.0);
        let e = self.exp + b - keep;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        round_parts(&self.mant, self.exp, prec, dir)
    }

    pub fn add_exact(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub_exact(&self, o: &Dyadic) -> Dyadic {
        self.add_exact(&o.neg())
    }

    pub fn mul_exact(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    pub fn add_round(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return o.round(prec, dir);
        }
        if o.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.top() >= o.top() { (self, o) } else { (o, self) };
        let guard = prec as i64 + 4;
        if big.top() - small.top() > guard {
            // `small` is below the last guard bit: fold it into a sticky unit.
            let s = (guard - bits(&big.mant)).max(0);
            let m = &big.mant << s as u64;
            let e = big.exp - s;
            let adj = match (dir, small.signum() > 0) {
                (Round::Down, true) => m,
                (Round::Down, false) => m - 1,
                (Round::Up, true) => m + 1,
                (Round::Up, false) => m,
            };
            return round_parts(&adj, e, prec, dir);
        }
        self.add_exact(o).round(prec, dir)
    }

    pub fn sub_round(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        self.add_round(&o.neg(), prec, dir)
    }

    pub fn mul_round(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        round_parts(&(&self.mant * &o.mant), self.exp + o.exp, prec, dir)
    }

    /// Quotient rounded in `dir`; panics on a zero divisor.
    pub fn div_round(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!o.is_zero(), "division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let k = (prec as i64 + 2 + bits(&o.mant) - bits(&self.mant)).max(0);
        let num = &self.mant << k as u64;
        let q = match dir {
            Round::Down => num.div_floor(&o.mant),
            Round::Up => -((-num).div_floor(&o.mant)),
        };
        round_parts(&q, self.exp - k - o.exp, prec, dir)
    }

    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let n = Dyadic::from_int(r.numer().clone());
        let d = Dyadic::from_int(r.denom().clone());
        if d.mant.is_one() && d.exp == 0 {
            return n.round(prec, dir);
        }
        // Exact when the denominator is a power of two.
        if d.mant.is_one() {
            return n.ldexp(-d.exp).round(prec, dir);
        }
        n.div_round(&d, prec, dir)
    }

    /// Decimal rendering with `digits` significant digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let r = self.to_rational();
        let neg = r.is_negative();
        let a = r.abs();
        // Choose k so that a * 10^k has `digits` integer digits.
        let approx = self.abs().to_f64();
        let mut k: i64 = if approx.is_finite() && approx > 0.0 {
            digits as i64 - 1 - approx.log10().floor() as i64
        } else {
            digits as i64 - 1 - ((self.top() as f64) * std::f64::consts::LOG10_2).floor() as i64
        };
        let ten = BigInt::from(10);
        let scaled = |k: i64| -> BigRational {
            if k >= 0 {
                &a * BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                &a / BigRational::from_integer(num_traits::pow(ten.clone(), (-k) as usize))
            }
        };
        let lim = num_traits::pow(ten.clone(), digits as usize);
        let mut s = scaled(k);
        while s.to_integer() >= lim {
            k -= 1;
            s = scaled(k);
        }
        // Magnitude rounding direction flips for negative values.
        let mag_dir = if neg { dir.flip() } else { dir };
        let int = match mag_dir {
            Round::Down => s.floor().to_integer(),
            Round::Up => s.ceil().to_integer(),
        };
        let mut txt = int.to_string();
        let out = if k > 0 {
            let k = k as usize;
            if txt.len() <= k {
                txt = format!("{}{}", "0".repeat(k - txt.len() + 1), txt);
            }
            let (i, f) = txt.split_at(txt.len() - k);
            let f = f.trim_end_matches('0');
            if f.is_empty() { i.to_string() } else { format!("{i}.{f}") }
        } else {
            format!("{}{}", txt, "0".repeat((-k) as usize))
        };
        if neg { format!("-{out}") } else { out }
    }
}

fn round_parts(mant: &BigInt, exp: i64, prec: u32, dir: Round) -> Dyadic {
    let b = bits(mant);
    if b <= prec as i64 {
        return Dyadic::new(mant.clone(), exp);
    }
    let s = (b - prec as i64) as u64;
    Dyadic::new(shr_dir(mant, s, dir), exp + s as i64)
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Dyadic) -> Ordering {
        let (sa, sb) = (self.signum(), o.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top(), o.top());
        if ta != tb {
            let mag = ta.cmp(&tb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(17, Round::Down))
    }
}
