//! Bases β ∈ (1, 2] with certified, refinable enclosures.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::error::{NumericsError, Result};
use crate::interval::{parse_decimal, Bound, Cmp3, RInterval, PREC_CAP};
use crate::poly::IntPoly;

pub type Refiner = Arc<dyn Fn(u32) -> Result<RInterval> + Send + Sync>;

#[derive(Clone)]
pub enum BetaDef {
    /// A decimal (or fraction) literal, held exactly.
    ExplicitDecimal { text: String, value: BigRational },
    /// The unique root of `poly` in the closed isolating interval.
    PolynomialRoot { poly: IntPoly, iso: (BigRational, BigRational) },
    /// A constant known only through certified enclosures (no polynomial).
    Enclosure { label: String, refiner: Refiner },
}

impl fmt::Debug for BetaDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaDef::ExplicitDecimal { text, .. } => write!(f, "ExplicitDecimal({text})"),
            BetaDef::PolynomialRoot { poly, iso } => write!(f, "PolynomialRoot({poly}, [{}, {}])", iso.0, iso.1),
            BetaDef::Enclosure { label, .. } => write!(f, "Enclosure({label})"),
        }
    }
}

struct Inner {
    def: BetaDef,
    /// Squarefree defining polynomial used for bracketing (roots only).
    sqf: Option<IntPoly>,
    /// Best known bracket; for roots, sign(P(lo)) = -sign(P(hi)) unless lo == hi.
    bracket: Mutex<RInterval>,
}

/// A certified base. Cloning is cheap; refinement state is shared.
#[derive(Clone)]
pub struct BetaValue {
    inner: Arc<Inner>,
}

impl fmt::Debug for BetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BetaValue({:?}, {})", self.inner.def, self.enclosure())
    }
}

impl fmt::Display for BetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec())
    }
}

fn sign_at(p: &IntPoly, x: &Dyadic) -> i32 {
    p.eval_dyadic(x).signum()
}

fn dyadic_inside(lo: &BigRational, hi: &BigRational, frac_num: i64, frac_den: i64) -> Dyadic {
    // A dyadic near lo + (hi - lo) * frac, strictly inside (lo, hi).
    let t = lo + (hi - lo) * BigRational::new(frac_num.into(), frac_den.into());
    let w = hi - lo;
    let mut prec = 32u32;
    loop {
        let d = Dyadic::from_rational(&t, prec, Round::Down);
        let r = d.to_rational();
        if (&r - &t).abs() * BigRational::from_integer(8.into()) < w && &r > lo && &r < hi {
            return d;
        }
        prec *= 2;
    }
}

impl BetaValue {
    fn build(def: BetaDef, sqf: Option<IntPoly>, bracket: RInterval) -> Result<BetaValue> {
        let b = BetaValue { inner: Arc::new(Inner { def, sqf, bracket: Mutex::new(bracket) }) };
        b.check_range()?;
        Ok(b)
    }

    fn check_range(&self) -> Result<()> {
        let one = RInterval::from_int(1, 64);
        let two = RInterval::from_int(2, 64);
        let out = || NumericsError::Domain(format!("base {} is not in (1, 2]", self.spec()));
        if let Some(r) = self.exact_rational() {
            let ok = r > BigRational::one() && r <= BigRational::from_integer(2.into());
            return if ok { Ok(()) } else { Err(out()) };
        }
        for bits in [32u32, 64, 128, 256, 512] {
            let e = match self.enclose_bits(bits) {
                Ok(e) => e,
                Err(_) => self.enclosure(),
            };
            let above_one = e.cmp3(&one) == Cmp3::Greater;
            let le_two = e.hi() <= two.lo();
            if above_one && le_two {
                return Ok(());
            }
            if e.hi() <= one.lo() || e.lo() > two.hi() {
                return Err(out());
            }
        }
        // Roots equal to 2 exactly are caught by exact_rational; anything else undecided.
        Err(out())
    }

    pub fn from_rational(text: &str, value: BigRational) -> Result<BetaValue> {
        let enc = RInterval::from_rational(&value, 128);
        BetaValue::build(BetaDef::ExplicitDecimal { text: text.to_string(), value }, None, enc)
    }

    pub fn from_decimal(text: &str) -> Result<BetaValue> {
        let v = parse_decimal(text)?;
        BetaValue::from_rational(text.trim(), v)
    }

    /// Root of `poly` in [lo, hi]; the interval must isolate exactly one root.
    pub fn from_poly(poly: IntPoly, lo: BigRational, hi: BigRational) -> Result<BetaValue> {
        if lo > hi {
            return Err(NumericsError::Domain("isolating interval has lo > hi".into()));
        }
        if poly.degree() == 0 {
            return Err(NumericsError::Domain("constant polynomial has no root".into()));
        }
        let count = poly.count_roots(&lo, &hi);
        if count != Some(1) {
            return Err(NumericsError::Domain(format!(
                "{poly} has {} roots in [{lo}, {hi}], need exactly one",
                count.map(|c| c.to_string()).unwrap_or_else(|| "an undetermined number of".into())
            )));
        }
        let sqf = poly.to_qpoly().squarefree().to_int_poly();
        let bracket = Self::initial_bracket(&sqf, &lo, &hi);
        let def = BetaDef::PolynomialRoot { poly, iso: (lo, hi) };
        BetaValue::build(def, Some(sqf), bracket)
    }

    fn initial_bracket(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> RInterval {
        let point = |r: &BigRational| -> Option<RInterval> {
            let d = Dyadic::from_rational(r, 4096, Round::Down);
            (d.to_rational() == *r).then(|| RInterval::point(d, 128))
        };
        if p.eval_rational(lo).is_zero() {
            if let Some(i) = point(lo) {
                return i;
            }
        }
        if p.eval_rational(hi).is_zero() {
            if let Some(i) = point(hi) {
                return i;
            }
        }
        let s_lo = p.eval_rational(lo).signum();
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        loop {
            let m1 = dyadic_inside(&lo, &hi, 1, 4);
            let m2 = dyadic_inside(&lo, &hi, 3, 4);
            let (r1, r2) = (m1.to_rational(), m2.to_rational());
            let (s1, s2) = (sign_at(p, &m1), sign_at(p, &m2));
            if s1 == 0 {
                return RInterval::point(m1, 128);
            }
            if s2 == 0 {
                return RInterval::point(m2, 128);
            }
            let s_lo_i = if s_lo.is_positive() { 1 } else { -1 };
            if s1 != s_lo_i {
                hi = r1;
            } else if s2 != s_lo_i {
                return RInterval::from_dyadics(m1, m2, 128);
            } else {
                lo = r2;
            }
        }
    }

    /// Base known only through `refiner(bits)`, which must return enclosures of width ≤ 2^-bits.
    pub fn from_enclosure(label: &str, refiner: Refiner) -> Result<BetaValue> {
        let enc = refiner(64)?;
        BetaValue::build(BetaDef::Enclosure { label: label.to_string(), refiner }, None, enc)
    }

    /// Parse `dec:<decimal>`, `poly:<polynomial>:[lo,hi]`, or a bare decimal.
    pub fn parse(spec: &str) -> Result<BetaValue> {
        let s = spec.trim();
        if let Some(d) = s.strip_prefix("dec:") {
            return BetaValue::from_decimal(d);
        }
        if let Some(rest) = s.strip_prefix("poly:") {
            let bad = || NumericsError::Parse(format!("bad base spec '{spec}'"));
            let (p, iv) = rest.rsplit_once(':').ok_or_else(bad)?;
            let iv = iv.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
            let (a, b) = iv.split_once(',').ok_or_else(bad)?;
            return BetaValue::from_poly(IntPoly::parse(p)?, parse_decimal(a)?, parse_decimal(b)?);
        }
        BetaValue::from_decimal(s)
    }

    pub fn definition(&self) -> &BetaDef {
        &self.inner.def
    }

    /// Canonical spec string (round-trips through `parse` except for enclosures).
    pub fn spec(&self) -> String {
        match &self.inner.def {
            BetaDef::ExplicitDecimal { text, .. } => format!("dec:{text}"),
            BetaDef::PolynomialRoot { poly, iso } => format!("poly:{poly}:[{},{}]", rat_text(&iso.0), rat_text(&iso.1)),
            BetaDef::Enclosure { label, .. } => label.clone(),
        }
    }

    /// Current best enclosure.
    pub fn enclosure(&self) -> RInterval {
        self.inner.bracket.lock().unwrap().clone()
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure().mid_f64()
    }

    /// Exact value when β is rational (a decimal, or a root that bracketing hit exactly).
    pub fn exact_rational(&self) -> Option<BigRational> {
        match &self.inner.def {
            BetaDef::ExplicitDecimal { value, .. } => Some(value.clone()),
            BetaDef::PolynomialRoot { poly, .. } => {
                let e = self.enclosure();
                if e.is_point() {
                    return e.lo_fin().map(|d| d.to_rational());
                }
                // Linear factors give rational roots.
                let sqf = self.inner.sqf.as_ref().unwrap_or(poly);
                if sqf.degree() == 1 {
                    let c = sqf.coeffs();
                    return Some(BigRational::new(-c[0].clone(), c[1].clone()));
                }
                None
            }
            BetaDef::Enclosure { .. } => None,
        }
    }

    /// A polynomial with β as a simple root, if β is algebraic.
    pub fn min_poly_candidate(&self) -> Option<IntPoly> {
        match &self.inner.def {
            BetaDef::ExplicitDecimal { value, .. } => {
                Some(IntPoly::new(vec![-value.numer().clone(), value.denom().clone()]))
            }
            BetaDef::PolynomialRoot { .. } => self.inner.sqf.clone(),
            BetaDef::Enclosure { .. } => None,
        }
    }

    /// Isolating interval of `min_poly_candidate` (exact rationals).
    pub fn isolating_interval(&self) -> Option<(BigRational, BigRational)> {
        match &self.inner.def {
            BetaDef::ExplicitDecimal { value, .. } => Some((value.clone(), value.clone())),
            BetaDef::PolynomialRoot { .. } => {
                let e = self.enclosure();
                Some((e.lo_fin()?.to_rational(), e.hi_fin()?.to_rational()))
            }
            BetaDef::Enclosure { .. } => None,
        }
    }

    pub fn is_algebraic(&self) -> bool {
        !matches!(self.inner.def, BetaDef::Enclosure { .. })
    }

    /// Enclosure of width ≤ 2^-bits, refining with a cap of max(bits, PREC_CAP) bits.
    pub fn enclose_bits(&self, bits: u32) -> Result<RInterval> {
        self.enclose_with_cap(bits, bits.max(PREC_CAP))
    }

    pub fn enclose_with_cap(&self, bits: u32, cap: u32) -> Result<RInterval> {
        if bits > cap {
            return Err(NumericsError::RefinementStall { bits: cap });
        }
        match &self.inner.def {
            BetaDef::ExplicitDecimal { value, .. } => Ok(RInterval::from_rational(value, bits + 4)),
            BetaDef::Enclosure { refiner, .. } => {
                let mut g = self.inner.bracket.lock().unwrap();
                if !width_ok(&g, bits) {
                    let e = refiner(bits)?;
                    if !width_ok(&e, bits) {
                        return Err(NumericsError::RefinementStall { bits });
                    }
                    *g = e;
                }
                Ok(g.with_prec(bits + 64))
            }
            BetaDef::PolynomialRoot { .. } => {
                let p = self.inner.sqf.as_ref().unwrap();
                let mut g = self.inner.bracket.lock().unwrap();
                if !width_ok(&g, bits) {
                    *g = refine_root(p, &g, bits);
                }
                Ok(g.with_prec(bits + 64))
            }
        }
    }

    /// New value with enclosure width ≤ `target_width` (default 4096-bit cap).
    pub fn refine(&self, target_width: f64) -> Result<BetaValue> {
        self.refine_capped(target_width, PREC_CAP)
    }

    pub fn refine_capped(&self, target_width: f64, cap: u32) -> Result<BetaValue> {
        if !(target_width > 0.0) {
            return Err(NumericsError::Domain("target width must be positive".into()));
        }
        let bits = (-target_width.log2()).ceil().max(1.0) as u32;
        if bits > cap {
            return Err(NumericsError::RefinementStall { bits: cap });
        }
        self.enclose_with_cap(bits, cap)?;
        Ok(self.clone())
    }
}

fn rat_text(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    // Terminating decimals print as decimals, everything else as a fraction.
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let k = twos.max(fives) as usize;
    let scaled = (r * BigRational::from_integer(num_traits::pow(BigInt::from(10), k))).to_integer();
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    if s.len() <= k {
        s = format!("{}{}", "0".repeat(k + 1 - s.len()), s);
    }
    let (i, f) = s.split_at(s.len() - k);
    format!("{}{i}.{f}", if neg { "-" } else { "" })
}

fn width_ok(e: &RInterval, bits: u32) -> bool {
    match e.width() {
        Some(w) => w.is_zero() || w.top() <= -(bits as i64),
        None => false,
    }
}

fn refine_root(p: &IntPoly, cur: &RInterval, bits: u32) -> RInterval {
    let (mut lo, mut hi) = (cur.lo_fin().unwrap().clone(), cur.hi_fin().unwrap().clone());
    if lo == hi {
        return cur.clone();
    }
    let s_lo = sign_at(p, &lo);
    let dp = p.derivative();
    let done = |lo: &Dyadic, hi: &Dyadic| {
        let w = hi.sub_exact(lo);
        w.is_zero() || w.top() <= -(bits as i64)
    };
    let mut newton_fail = 0;
    while !done(&lo, &hi) {
        let w = hi.sub_exact(&lo);
        let wbits = -w.top();
        if wbits > 40 && newton_fail < 3 {
            // Newton from the midpoint; accept only a verified sign change.
            let x = lo.add_exact(&hi).ldexp(-1);
            let prec = (2 * wbits + 64).min(bits as i64 + 128) as u32;
            let fx = p.eval_dyadic(&x);
            let dfx = dp.eval_dyadic(&x);
            if !dfx.is_zero() {
                let y = x.sub_exact(&fx.div_round(&dfx, prec + 8, Round::Down).round(prec + 8, Round::Down));
                let y = y.round(prec + 8, Round::Down);
                let target = (2 * wbits - 16).min(bits as i64 + 8);
                let eps = Dyadic::one().ldexp(-target);
                let a = y.sub_exact(&eps).max(lo.clone());
                let b = y.add_exact(&eps).min(hi.clone());
                if a < b {
                    let (sa, sb) = (sign_at(p, &a), sign_at(p, &b));
                    if sa == 0 {
                        return RInterval::point(a, bits + 64);
                    }
                    if sb == 0 {
                        return RInterval::point(b, bits + 64);
                    }
                    if sa == s_lo && sb == -s_lo {
                        lo = a;
                        hi = b;
                        continue;
                    }
                }
            }
            newton_fail += 1;
        }
        let m = lo.add_exact(&hi).ldexp(-1);
        let s = sign_at(p, &m);
        if s == 0 {
            return RInterval::point(m, bits + 64);
        }
        if s == s_lo {
            lo = m;
        } else {
            hi = m;
        }
        if wbits > 40 && newton_fail >= 3 && (wbits % 16 == 0) {
            newton_fail = 0;
        }
    }
    RInterval::from_dyadics(lo, hi, bits + 64)
}

/// Certified order of two bases, with exact equality detection for algebraic values.
pub fn compare_beta(a: &BetaValue, b: &BetaValue) -> Result<Ordering> {
    if let (Some(x), Some(y)) = (a.exact_rational(), b.exact_rational()) {
        return Ok(x.cmp(&y));
    }
    let mut equality_checked = false;
    let mut bits = 64u32;
    loop {
        let ea = a.enclose_bits(bits);
        let eb = b.enclose_bits(bits);
        let (ea, eb) = match (ea, eb) {
            (Ok(x), Ok(y)) => (x, y),
            _ => (a.enclosure(), b.enclosure()),
        };
        match ea.cmp3(&eb) {
            Cmp3::Less => return Ok(Ordering::Less),
            Cmp3::Greater => return Ok(Ordering::Greater),
            Cmp3::Overlapping => {}
        }
        if !equality_checked {
            if let (Some(pa), Some(pb)) = (a.min_poly_candidate(), b.min_poly_candidate()) {
                equality_checked = true;
                let g = pa.to_qpoly().gcd(&pb.to_qpoly());
                if g.degree() >= 1 {
                    if let Some(iv) = ea.intersect(&eb) {
                        if let (Bound::Fin(l), Bound::Fin(h)) = (iv.lo(), iv.hi()) {
                            let gi = g.to_int_poly();
                            if gi.count_roots(&l.to_rational(), &h.to_rational()) == Some(1) {
                                return Ok(Ordering::Equal);
                            }
                        }
                    }
                }
            }
        }
        let cap = if a.is_algebraic() && b.is_algebraic() { 1 << 16 } else { PREC_CAP };
        if bits >= cap {
            return Err(NumericsError::BoundaryUndecidable(format!("ordering of {a} and {b}")));
        }
        bits *= 2;
    }
}
