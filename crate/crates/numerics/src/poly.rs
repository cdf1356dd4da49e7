//! Integer and rational univariate polynomials (ascending coefficients).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::Dyadic;
use crate::error::{NumericsError, Result};
use crate::interval::RInterval;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> IntPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    /// Parse forms like `x^3-x^2-1`, `2*x - 3`, `x^4 - x^3 - x^2 - 1`.
    pub fn parse(s: &str) -> Result<IntPoly> {
        let bad = |m: &str| NumericsError::Parse(format!("polynomial '{s}': {m}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in t.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut c: Vec<BigInt> = Vec::new();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let (coef, pow) = match body.find('x') {
                None => (body.parse::<BigInt>().map_err(|_| bad("bad constant"))?, 0usize),
                Some(i) => {
                    let head = body[..i].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        BigInt::one()
                    } else {
                        head.parse::<BigInt>().map_err(|_| bad("bad coefficient"))?
                    };
                    let tail = &body[i + 1..];
                    let pow = if tail.is_empty() {
                        1
                    } else {
                        let p = tail.strip_prefix('^').ok_or_else(|| bad("expected ^"))?;
                        p.parse::<usize>().map_err(|_| bad("bad exponent"))?
                    };
                    (coef, pow)
                }
            };
            if pow > 4096 {
                return Err(bad("degree too large"));
            }
            if c.len() <= pow {
                c.resize(pow + 1, BigInt::zero());
            }
            if neg {
                c[pow] -= coef;
            } else {
                c[pow] += coef;
            }
        }
        let p = IntPoly::new(c);
        if p.is_zero() {
            return Err(bad("zero polynomial"));
        }
        Ok(p)
    }

    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul_exact(x).add_exact(&Dyadic::from_int(a.clone()));
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        // Homogenized Horner keeps everything integral until the final division.
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for a in self.c.iter().rev() {
            acc = acc * n + a * &dpow;
            dpow *= d;
        }
        BigRational::new(acc * d, dpow)
    }

    pub fn eval_interval(&self, x: &RInterval) -> RInterval {
        let mut acc = RInterval::from_int(0, x.prec());
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(&RInterval::from_int(a.clone(), x.prec()));
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect())
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| BigRational::from_integer(a.clone())).collect())
    }

    /// Sign variations of the coefficient sequence (zeros skipped).
    pub fn sign_variations(&self) -> usize {
        let mut last = 0;
        let mut v = 0;
        for a in &self.c {
            let s = if a.is_positive() { 1 } else if a.is_negative() { -1 } else { 0 };
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Descartes bound for roots in the open interval (lo, hi), via the Möbius
    /// substitution x = (lo + hi t)/(1 + t).
    pub fn interval_variations(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let q = self.to_qpoly();
        let d = self.degree();
        // sum_k a_k (lo + hi t)^k (1 + t)^(d - k)
        let lin_a = QPoly::new(vec![lo.clone(), hi.clone()]);
        let lin_b = QPoly::new(vec![BigRational::one(), BigRational::one()]);
        let mut acc = QPoly::zero();
        for (k, a) in q.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = lin_a.pow(k).mul(&lin_b.pow(d - k)).scale(a);
            acc = acc.add(&term);
        }
        acc.to_int_poly().sign_variations()
    }

    /// Number of distinct real roots in the closed interval [lo, hi], counted by
    /// Descartes subdivision. None if the depth cap is hit.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> Option<usize> {
        let sf = self.to_qpoly().squarefree().to_int_poly();
        let mut n = 0;
        if sf.eval_rational(lo).is_zero() {
            n += 1;
        }
        if hi != lo && sf.eval_rational(hi).is_zero() {
            n += 1;
        }
        if hi == lo {
            return Some(n);
        }
        n += sf.count_open(lo, hi, 0)?;
        Some(n)
    }

    fn count_open(&self, lo: &BigRational, hi: &BigRational, depth: u32) -> Option<usize> {
        match self.interval_variations(lo, hi) {
            0 => Some(0),
            1 => Some(1),
            _ if depth > 200 => None,
            _ => {
                let mid = (lo + hi) / BigRational::from_integer(2.into());
                let at_mid = usize::from(self.eval_rational(&mid).is_zero());
                Some(self.count_open(lo, &mid, depth + 1)? + at_mid + self.count_open(&mid, hi, depth + 1)?)
            }
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let m = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = m.is_one() && k > 0;
            if !unit {
                write!(f, "{m}")?;
                if k > 0 {
                    write!(f, "*")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    c: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> QPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn zero() -> QPoly {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> QPoly {
        QPoly { c: vec![BigRational::one()] }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        let z = BigRational::zero();
        QPoly::new((0..n).map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut r = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }

    pub fn pow(&self, k: usize) -> QPoly {
        let mut r = QPoly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn divrem(&self, o: &QPoly) -> (QPoly, QPoly) {
        assert!(!o.is_zero(), "polynomial division by zero");
        let mut r = self.c.clone();
        let dl = o.degree();
        let lc = o.lead();
        if r.len() < o.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dl];
        for k in (0..q.len()).rev() {
            let t = &r[k + dl] / &lc;
            if !t.is_zero() {
                for (j, b) in o.c.iter().enumerate() {
                    r[k + j] -= &t * b;
                }
            }
            q[k] = t;
        }
        r.truncate(dl);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, o: &QPoly) -> QPoly {
        self.divrem(o).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s) with s*self = g mod o, g = gcd(self, o) monic.
    pub fn ext_gcd_left(&self, o: &QPoly) -> (QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let k = r0.lead().recip();
        (r0.scale(&k), s0.scale(&k))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// self / gcd(self, self'), made monic.
    pub fn squarefree(&self) -> QPoly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Primitive integer polynomial with the same roots (positive leading coefficient).
    pub fn to_int_poly(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let l = self.c.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let mut v: Vec<BigInt> = self.c.iter().map(|a| (a * BigRational::from_integer(l.clone())).to_integer()).collect();
        let g = v.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        if !g.is_zero() && !g.is_one() {
            for a in v.iter_mut() {
                *a /= &g;
            }
        }
        if v.last().is_some_and(|a| a.is_negative()) {
            for a in v.iter_mut() {
                *a = -&*a;
            }
        }
        IntPoly::new(v)
    }
}
