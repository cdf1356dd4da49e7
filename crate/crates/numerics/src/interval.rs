//! Outward-rounded interval arithmetic over dyadic endpoints.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::error::NumericsError;

pub const DEFAULT_PREC: u32 = 128;
pub const PREC_CAP: u32 = 4096;

/// Extended-real endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Fin(Dyadic),
    PosInf,
}

impl Bound {
    fn rank(&self) -> i8 {
        match self {
            Bound::NegInf => -1,
            Bound::Fin(_) => 0,
            Bound::PosInf => 1,
        }
    }

    pub fn finite(&self) -> Option<&Dyadic> {
        match self {
            Bound::Fin(d) => Some(d),
            _ => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Bound::NegInf => -1,
            Bound::PosInf => 1,
            Bound::Fin(d) => d.signum(),
        }
    }

    fn neg(&self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Fin(d) => Bound::Fin(d.neg()),
        }
    }

    fn add(&self, o: &Bound, prec: u32, dir: Round) -> Bound {
        match (self, o) {
            (Bound::Fin(a), Bound::Fin(b)) => Bound::Fin(a.add_round(b, prec, dir)),
            (Bound::NegInf, Bound::PosInf) | (Bound::PosInf, Bound::NegInf) => match dir {
                Round::Down => Bound::NegInf,
                Round::Up => Bound::PosInf,
            },
            (Bound::Fin(_), inf) | (inf, _) => inf.clone(),
        }
    }

    fn mul(&self, o: &Bound, prec: u32, dir: Round) -> Bound {
        match (self, o) {
            (Bound::Fin(a), Bound::Fin(b)) => Bound::Fin(a.mul_round(b, prec, dir)),
            _ => {
                let s = self.signum() * o.signum();
                match s.cmp(&0) {
                    Ordering::Less => Bound::NegInf,
                    Ordering::Equal => Bound::Fin(Dyadic::zero()),
                    Ordering::Greater => Bound::PosInf,
                }
            }
        }
    }

    fn div(&self, o: &Bound, prec: u32, dir: Round) -> Bound {
        // Caller guarantees o != 0.
        match (self, o) {
            (Bound::Fin(a), Bound::Fin(b)) => Bound::Fin(a.div_round(b, prec, dir)),
            (Bound::Fin(_), _) => Bound::Fin(Dyadic::zero()),
            _ => {
                if self.signum() * o.signum() < 0 {
                    Bound::NegInf
                } else {
                    Bound::PosInf
                }
            }
        }
    }
}

impl Ord for Bound {
    fn cmp(&self, o: &Bound) -> Ordering {
        match (self, o) {
            (Bound::Fin(a), Bound::Fin(b)) => a.cmp(b),
            _ => self.rank().cmp(&o.rank()),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, o: &Bound) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Three-way outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp3 {
    Less,
    Greater,
    Overlapping,
}

impl Cmp3 {
    pub fn reverse(self) -> Cmp3 {
        match self {
            Cmp3::Less => Cmp3::Greater,
            Cmp3::Greater => Cmp3::Less,
            Cmp3::Overlapping => Cmp3::Overlapping,
        }
    }
}

/// Closed interval `[lo, hi]` known to contain some real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RInterval {
    lo: Bound,
    hi: Bound,
    prec: u32,
}

impl RInterval {
    pub fn new(lo: Bound, hi: Bound, prec: u32) -> RInterval {
        assert!(lo <= hi, "interval with lo > hi");
        assert!(lo != Bound::PosInf && hi != Bound::NegInf, "empty infinite interval");
        RInterval { lo, hi, prec: prec.max(2) }
    }

    pub fn from_dyadics(lo: Dyadic, hi: Dyadic, prec: u32) -> RInterval {
        RInterval::new(Bound::Fin(lo), Bound::Fin(hi), prec)
    }

    pub fn point(d: Dyadic, prec: u32) -> RInterval {
        RInterval::new(Bound::Fin(d.clone()), Bound::Fin(d), prec)
    }

    pub fn entire(prec: u32) -> RInterval {
        RInterval::new(Bound::NegInf, Bound::PosInf, prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> RInterval {
        RInterval::point(Dyadic::from_int(v), prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> RInterval {
        RInterval::point(Dyadic::from_f64(v), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> RInterval {
        RInterval::from_dyadics(
            Dyadic::from_rational(r, prec, Round::Down),
            Dyadic::from_rational(r, prec, Round::Up),
            prec,
        )
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> RInterval {
        RInterval { lo: self.lo.clone(), hi: self.hi.clone(), prec: prec.max(2) }
    }

    pub fn lo_fin(&self) -> Option<&Dyadic> {
        self.lo.finite()
    }

    pub fn hi_fin(&self) -> Option<&Dyadic> {
        self.hi.finite()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.finite().is_some() && self.hi.finite().is_some()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on hi - lo (None when unbounded).
    pub fn width(&self) -> Option<Dyadic> {
        match (&self.lo, &self.hi) {
            (Bound::Fin(a), Bound::Fin(b)) => Some(b.sub_round(a, 64, Round::Up)),
            _ => None,
        }
    }

    pub fn width_f64(&self) -> f64 {
        self.width().map(|w| w.to_f64()).unwrap_or(f64::INFINITY)
    }

    /// Some point inside the interval (the midpoint when finite).
    pub fn mid(&self) -> Dyadic {
        match (&self.lo, &self.hi) {
            (Bound::Fin(a), Bound::Fin(b)) => a.add_exact(b).ldexp(-1),
            (Bound::Fin(a), _) => a.clone(),
            (_, Bound::Fin(b)) => b.clone(),
            _ => Dyadic::zero(),
        }
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains_dyadic(&self, d: &Dyadic) -> bool {
        let b = Bound::Fin(d.clone());
        self.lo <= b && b <= self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        let above_lo = match &self.lo {
            Bound::NegInf => true,
            Bound::PosInf => false,
            Bound::Fin(a) => a.to_rational() <= *r,
        };
        let below_hi = match &self.hi {
            Bound::PosInf => true,
            Bound::NegInf => false,
            Bound::Fin(b) => *r <= b.to_rational(),
        };
        above_lo && below_hi
    }

    pub fn contains(&self, o: &RInterval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    /// `self` lies in the interior of `o`.
    pub fn strictly_inside(&self, o: &RInterval) -> bool {
        o.lo < self.lo && self.hi < o.hi
    }

    pub fn hull(&self, o: &RInterval) -> RInterval {
        RInterval::new(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
            self.prec.max(o.prec),
        )
    }

    pub fn intersect(&self, o: &RInterval) -> Option<RInterval> {
        let lo = self.lo.clone().max(o.lo.clone());
        let hi = self.hi.clone().min(o.hi.clone());
        if lo <= hi {
            Some(RInterval::new(lo, hi, self.prec.max(o.prec)))
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// Sign when certain: Some(-1|0|1) (0 only for the point interval [0,0]).
    pub fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else if self.lo.signum() == 0 && self.hi.signum() == 0 {
            Some(0)
        } else {
            None
        }
    }

    pub fn cmp3(&self, o: &RInterval) -> Cmp3 {
        if self.hi < o.lo {
            Cmp3::Less
        } else if self.lo > o.hi {
            Cmp3::Greater
        } else {
            Cmp3::Overlapping
        }
    }

    fn p(&self, o: &RInterval) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn add(&self, o: &RInterval) -> RInterval {
        let p = self.p(o);
        RInterval::new(self.lo.add(&o.lo, p, Round::Down), self.hi.add(&o.hi, p, Round::Up), p)
    }

    pub fn sub(&self, o: &RInterval) -> RInterval {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RInterval {
        RInterval { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn mul(&self, o: &RInterval) -> RInterval {
        let p = self.p(o);
        let c = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = c.iter().map(|(a, b)| a.mul(b, p, Round::Down)).min().unwrap();
        let hi = c.iter().map(|(a, b)| a.mul(b, p, Round::Up)).max().unwrap();
        RInterval::new(lo, hi, p)
    }

    /// Quotient; a divisor containing zero yields the entire line.
    pub fn div(&self, o: &RInterval) -> RInterval {
        let p = self.p(o);
        if o.contains_zero() {
            return RInterval::entire(p);
        }
        let c = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = c.iter().map(|(a, b)| a.div(b, p, Round::Down)).min().unwrap();
        let hi = c.iter().map(|(a, b)| a.div(b, p, Round::Up)).max().unwrap();
        RInterval::new(lo, hi, p)
    }

    pub fn recip(&self) -> RInterval {
        RInterval::from_int(1, self.prec).div(self)
    }

    pub fn mul_int(&self, k: i64) -> RInterval {
        self.mul(&RInterval::from_int(k, self.prec))
    }

    pub fn add_int(&self, k: i64) -> RInterval {
        self.add(&RInterval::from_int(k, self.prec))
    }

    pub fn abs(&self) -> RInterval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            let m = self.lo.neg().max(self.hi.clone());
            RInterval::new(Bound::Fin(Dyadic::zero()), m, self.prec)
        }
    }

    pub fn sqr(&self) -> RInterval {
        self.powi(2)
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, n: i64) -> RInterval {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let n = n as u64;
        if n == 0 {
            return RInterval::from_int(1, self.prec);
        }
        let p = self.prec;
        let pw = |b: &Bound, dir: Round| -> Bound { bound_pow(b, n, p, dir) };
        if n % 2 == 1 || self.lo.signum() >= 0 {
            RInterval::new(pw(&self.lo, Round::Down), pw(&self.hi, Round::Up), p)
        } else if self.hi.signum() <= 0 {
            RInterval::new(pw(&self.hi, Round::Down), pw(&self.lo, Round::Up), p)
        } else {
            let m = self.lo.neg().max(self.hi.clone());
            RInterval::new(Bound::Fin(Dyadic::zero()), pw(&m, Round::Up), p)
        }
    }

    /// Enclosure of r^{-n}/(r-1), the tail sum of r^{-i} for i > n.
    pub fn geometric_tail(r: &RInterval, n: u64) -> Result<RInterval, NumericsError> {
        if r.lo <= Bound::Fin(Dyadic::one()) {
            return Err(NumericsError::Domain("geometric_tail needs r > 1".into()));
        }
        // Decreasing in r: evaluate at the endpoints.
        let f = |x: &Bound| -> RInterval {
            match x {
                Bound::Fin(d) => {
                    let x = RInterval::point(d.clone(), r.prec);
                    x.powi(-(n as i64)).div(&x.add_int(-1))
                }
                _ => RInterval::from_int(0, r.prec),
            }
        };
        let at_hi = f(&r.hi);
        let at_lo = f(&r.lo);
        Ok(RInterval::new(at_hi.lo, at_lo.hi, r.prec))
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Result<RInterval, NumericsError> {
        if !self.is_positive() {
            return Err(NumericsError::Domain("ln of a non-positive interval".into()));
        }
        let p = self.prec;
        let lo = ln_dyadic(self.lo.finite().unwrap(), p).lo;
        let hi = match &self.hi {
            Bound::Fin(d) => ln_dyadic(d, p).hi,
            _ => Bound::PosInf,
        };
        Ok(RInterval::new(lo, hi, p))
    }

    pub fn to_string_digits(&self, digits: u32) -> String {
        let f = |b: &Bound, dir: Round| match b {
            Bound::NegInf => "-inf".to_string(),
            Bound::PosInf => "inf".to_string(),
            Bound::Fin(d) => d.to_decimal(digits, dir),
        };
        format!("[{}, {}]", f(&self.lo, Round::Down), f(&self.hi, Round::Up))
    }

    pub fn lo_decimal(&self, digits: u32) -> String {
        match &self.lo {
            Bound::Fin(d) => d.to_decimal(digits, Round::Down),
            Bound::NegInf => "-inf".into(),
            Bound::PosInf => "inf".into(),
        }
    }

    pub fn hi_decimal(&self, digits: u32) -> String {
        match &self.hi {
            Bound::Fin(d) => d.to_decimal(digits, Round::Up),
            Bound::NegInf => "-inf".into(),
            Bound::PosInf => "inf".into(),
        }
    }
}

fn bound_pow(b: &Bound, n: u64, prec: u32, dir: Round) -> Bound {
    match b {
        Bound::Fin(d) => {
            let neg = d.signum() < 0 && n % 2 == 1;
            // |d|^n rounded toward the side that keeps the signed result outward.
            let mag_dir = if neg { dir.flip() } else { dir };
            let mut acc = Dyadic::one();
            let mut base = d.abs();
            let mut e = n;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc.mul_round(&base, prec, mag_dir);
                }
                e >>= 1;
                if e > 0 {
                    base = base.mul_round(&base, prec, mag_dir);
                }
            }
            Bound::Fin(if neg { acc.neg() } else { acc })
        }
        Bound::PosInf => Bound::PosInf,
        Bound::NegInf => {
            if n % 2 == 0 {
                Bound::PosInf
            } else {
                Bound::NegInf
            }
        }
    }
}

/// ln(2) enclosure via 2*atanh(1/3).
pub fn ln2(prec: u32) -> RInterval {
    let p = prec + 16;
    let t = RInterval::from_int(1, p).div(&RInterval::from_int(3, p));
    atanh_series(&t, p).mul_int(2).with_prec(prec)
}

/// atanh(t) for 0 <= t <= 1/3 with a certified remainder.
fn atanh_series(t: &RInterval, p: u32) -> RInterval {
    let t2 = t.sqr();
    let mut term = t.clone();
    let mut sum = RInterval::from_int(0, p);
    let mut k: i64 = 0;
    loop {
        sum = sum.add(&term.div(&RInterval::from_int(2 * k + 1, p)));
        term = term.mul(&t2);
        k += 1;
        // Remainder <= term_k / ((2k+1)(1 - t^2)), with t^2 <= 1/9.
        let rem = term
            .div(&RInterval::from_int(2 * k + 1, p))
            .mul(&RInterval::from_int(9, p))
            .div(&RInterval::from_int(8, p));
        let w = rem.hi_fin().cloned().unwrap_or_else(Dyadic::one);
        if w.is_zero() || w.top() < -(p as i64) - 4 || k > 4 * p as i64 {
            let r = RInterval::new(Bound::Fin(Dyadic::zero()), Bound::Fin(w), p);
            return sum.add(&r);
        }
    }
}

fn ln_dyadic(d: &Dyadic, prec: u32) -> RInterval {
    let p = prec + 16;
    // d = m * 2^e with m in [1, 2).
    let e = d.top() - 1;
    let m = RInterval::point(d.ldexp(-e), p);
    let t = m.add_int(-1).div(&m.add_int(1));
    let lnm = atanh_series(&t, p).mul_int(2);
    let r = ln2(p).mul(&RInterval::from_int(e, p)).add(&lnm);
    r.with_prec(prec)
}

/// Certified comparison. When the enclosures overlap, `refiner` is asked for tighter
/// enclosures (attempt index passed in) until it declines or `retries` is exhausted.
pub fn compare<F>(a: &RInterval, b: &RInterval, mut refiner: Option<F>, retries: u32) -> Cmp3
where
    F: FnMut(u32) -> Option<(RInterval, RInterval)>,
{
    let mut c = a.cmp3(b);
    if c != Cmp3::Overlapping {
        return c;
    }
    if let Some(f) = refiner.as_mut() {
        for attempt in 0..retries {
            match f(attempt) {
                Some((x, y)) => {
                    c = x.cmp3(&y);
                    if c != Cmp3::Overlapping {
                        return c;
                    }
                }
                None => break,
            }
        }
    }
    c
}

/// Convenience: compare without refinement.
pub fn compare_plain(a: &RInterval, b: &RInterval) -> Cmp3 {
    a.cmp3(b)
}

impl fmt::Display for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(17))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&RInterval> for &RInterval {
            type Output = RInterval;
            fn $m(self, o: &RInterval) -> RInterval {
                RInterval::$m(self, o)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &RInterval {
    type Output = RInterval;
    fn neg(self) -> RInterval {
        RInterval::neg(self)
    }
}

/// Parse a plain decimal such as "-1.25e-3" into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational, NumericsError> {
    let bad = || NumericsError::Parse(format!("bad decimal '{s}'"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

pub fn rational_is_negative(r: &BigRational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trivial_comparisons() {
        let a = RInterval::from_dyadics(Dyadic::from_int(1), Dyadic::from_int(2), 64);
        let b = RInterval::from_dyadics(Dyadic::from_int(3), Dyadic::from_int(4), 64);
        let c = RInterval::from_dyadics(Dyadic::from_int(2), Dyadic::from_int(4), 64);
        let d = RInterval::from_dyadics(Dyadic::from_int(1), Dyadic::from_int(3), 64);
        assert_eq!(compare_plain(&a, &b), Cmp3::Less);
        assert_eq!(compare_plain(&b, &a), Cmp3::Greater);
        assert_eq!(compare_plain(&d, &c), Cmp3::Overlapping);
    }

    #[test]
    fn refiner_resolves_overlap() {
        let third = |p: u32| RInterval::from_rational(&q(1, 3), p);
        let near = |p: u32| RInterval::from_rational(&q(1_000_001, 3_000_000), p);
        let r = compare(&third(8), &near(8), Some(|k: u32| Some((third(16 << k), near(16 << k)))), 6);
        assert_eq!(r, Cmp3::Less);
    }

    #[test]
    fn geometric_tail_examples() {
        let two = RInterval::from_int(2, 64);
        assert_eq!(RInterval::geometric_tail(&two, 0).unwrap(), RInterval::from_int(1, 64));
        let t = RInterval::geometric_tail(&two, 3).unwrap();
        assert!(t.is_point() && t.contains_rational(&q(1, 8)));
        let r = RInterval::from_rational(&q(103, 100), 128);
        let t = RInterval::geometric_tail(&r, 1000).unwrap();
        assert!(t.hi_fin().unwrap().to_f64() <= 1e-11);
        assert!(t.is_positive());
        assert!(RInterval::geometric_tail(&RInterval::from_int(1, 64), 2).is_err());
    }

    #[test]
    fn ln_matches_f64() {
        let l2 = ln2(128);
        assert!(l2.contains_dyadic(&Dyadic::from_f64(std::f64::consts::LN_2)) || l2.width_f64() < 1e-30);
        assert!((l2.mid_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        let x = RInterval::from_rational(&q(7, 5), 128).ln().unwrap();
        assert!((x.mid_f64() - 1.4f64.ln()).abs() < 1e-15);
        assert!(x.width_f64() < 1e-30);
    }

    #[test]
    fn division_by_straddling_interval_is_entire() {
        let a = RInterval::from_int(1, 64);
        let z = RInterval::from_dyadics(Dyadic::from_int(-1), Dyadic::from_int(1), 64);
        assert_eq!(a.div(&z), RInterval::entire(64));
    }

    #[test]
    fn parses_decimals() {
        assert_eq!(parse_decimal("1.5").unwrap(), q(3, 2));
        assert_eq!(parse_decimal("-0.041").unwrap(), q(-41, 1000));
        assert_eq!(parse_decimal("2e-2").unwrap(), q(1, 50));
        assert_eq!(parse_decimal("7/16").unwrap(), q(7, 16));
        assert!(parse_decimal("1.2.3").is_err());
    }
}
