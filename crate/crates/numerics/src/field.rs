//! Exact arithmetic in Q(β) for algebraic bases.
//!
//! Elements are `(c_0 + c_1 β + … + c_{d-1} β^{d-1}) / den` with integer `c_i` and
//! `den > 0`, reduced modulo the defining polynomial. Rational bases use d = 1.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::beta::BetaValue;
use crate::dyadic::{Dyadic, Round};
use crate::error::{NumericsError, Result};
use crate::interval::RInterval;
use crate::poly::{IntPoly, QPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem {
    c: Vec<BigInt>,
    den: BigInt,
}

impl Elem {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    /// Largest coefficient size in bits, minus the denominator's.
    pub fn excess_bits(&self) -> i64 {
        let m = self.c.iter().map(|a| a.bits()).max().unwrap_or(0) as i64;
        m - self.den.bits() as i64
    }

    pub fn size_bits(&self) -> u64 {
        self.c.iter().map(|a| a.bits()).max().unwrap_or(0).max(self.den.bits())
    }
}

#[derive(Debug)]
enum Kind {
    /// β = a / b.
    Rational { a: BigInt, b: BigInt },
    /// Ascending coefficients of the defining polynomial (degree d ≥ 2).
    Poly { p: Vec<BigInt> },
}

struct Inner {
    beta: BetaValue,
    kind: Kind,
    d: usize,
}

/// The number field Q(β) together with β's certified enclosure.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({:?}, d={})", self.inner.beta, self.inner.d)
    }
}

fn euler_phi(mut k: usize) -> usize {
    let mut r = k;
    let mut f = 2;
    while f * f <= k {
        if k % f == 0 {
            while k % f == 0 {
                k /= f;
            }
            r -= r / f;
        }
        f += 1;
    }
    if k > 1 {
        r -= r / k;
    }
    r
}

/// Remove cyclotomic factors Φ_k. A factor Φ_k needs φ(k) ≤ deg, hence k ≤ 2·deg².
/// x^k mod q is carried along so each test is a gcd of two polynomials of degree < deg q.
fn strip_cyclotomic(p: &IntPoly) -> IntPoly {
    let d = p.degree();
    if d > 16 {
        return p.clone();
    }
    let mut q = p.to_qpoly();
    let x = QPoly::new(vec![BigRational::zero(), BigRational::one()]);
    let one = QPoly::new(vec![BigRational::one()]);
    let mut xk = one.clone();
    for k in 1..=(2 * d * d + 2) {
        if q.degree() <= 1 {
            break;
        }
        xk = xk.mul(&x).rem(&q);
        if euler_phi(k) > q.degree() {
            continue;
        }
        let g = q.gcd(&xk.sub(&one));
        if g.degree() >= 1 {
            q = q.divrem(&g).0;
            xk = one.clone();
            for _ in 0..k {
                xk = xk.mul(&x).rem(&q);
            }
        }
    }
    q.to_int_poly()
}

impl Field {
    pub fn new(beta: &BetaValue) -> Result<Field> {
        let kind = if let Some(r) = beta.exact_rational() {
            Kind::Rational { a: r.numer().clone(), b: r.denom().clone() }
        } else {
            let p = beta.min_poly_candidate().ok_or_else(|| NumericsError::NotAlgebraic(beta.spec()))?;
            let p = strip_cyclotomic(&p);
            if p.degree() == 1 {
                let c = p.coeffs();
                let (mut a, mut b) = (-c[0].clone(), c[1].clone());
                if b.is_negative() {
                    a = -a;
                    b = -b;
                }
                Kind::Rational { a, b }
            } else {
                Kind::Poly { p: p.coeffs().to_vec() }
            }
        };
        let d = match &kind {
            Kind::Rational { .. } => 1,
            Kind::Poly { p } => p.len() - 1,
        };
        Ok(Field { inner: Arc::new(Inner { beta: beta.clone(), kind, d }) })
    }

    pub fn beta(&self) -> &BetaValue {
        &self.inner.beta
    }

    pub fn degree(&self) -> usize {
        self.inner.d
    }

    pub fn is_rational(&self) -> bool {
        self.inner.d == 1
    }

    /// Defining polynomial (degree 1 for rational bases).
    pub fn poly(&self) -> IntPoly {
        match &self.inner.kind {
            Kind::Rational { a, b } => IntPoly::new(vec![-a.clone(), b.clone()]),
            Kind::Poly { p } => IntPoly::new(p.clone()),
        }
    }

    fn mk(&self, c: Vec<BigInt>, den: BigInt) -> Elem {
        debug_assert_eq!(c.len(), self.inner.d);
        Elem { c, den }
    }

    pub fn zero(&self) -> Elem {
        self.from_int(0)
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Elem {
        self.from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(&self, v: BigInt) -> Elem {
        let mut c = vec![BigInt::zero(); self.inner.d];
        c[0] = v;
        self.mk(c, BigInt::one())
    }

    pub fn from_rational(&self, r: &BigRational) -> Elem {
        let mut c = vec![BigInt::zero(); self.inner.d];
        c[0] = r.numer().clone();
        self.mk(c, r.denom().clone())
    }

    /// Some(q) when the element is a rational constant in this representation.
    pub fn as_rational(&self, e: &Elem) -> Option<BigRational> {
        if e.c.iter().skip(1).all(|a| a.is_zero()) {
            Some(BigRational::new(e.c[0].clone(), e.den.clone()))
        } else {
            None
        }
    }

    /// The generator β.
    pub fn gen(&self) -> Elem {
        match &self.inner.kind {
            Kind::Rational { a, b } => self.mk(vec![a.clone()], b.clone()),
            Kind::Poly { .. } => {
                let mut c = vec![BigInt::zero(); self.inner.d];
                c[1] = BigInt::one();
                self.mk(c, BigInt::one())
            }
        }
    }

    /// Remove common factors of the coefficients and the denominator.
    pub fn normalize(&self, e: &Elem) -> Elem {
        let mut g = e.den.clone();
        for a in &e.c {
            if g.is_one() {
                break;
            }
            g = g.gcd(a);
        }
        if g.is_one() || g.is_zero() {
            return e.clone();
        }
        self.mk(e.c.iter().map(|a| a / &g).collect(), &e.den / &g)
    }

    fn reduce(&self, mut c: Vec<BigInt>, mut den: BigInt) -> Elem {
        let d = self.inner.d;
        match &self.inner.kind {
            Kind::Rational { .. } => {
                debug_assert_eq!(c.len(), 1);
                self.mk(c, den)
            }
            Kind::Poly { p } => {
                let pd = &p[d];
                for k in (d..c.len()).rev() {
                    let t = std::mem::take(&mut c[k]);
                    if t.is_zero() {
                        continue;
                    }
                    if !pd.is_one() {
                        for a in c[..k].iter_mut() {
                            *a *= pd;
                        }
                        den *= pd;
                    }
                    for i in 0..d {
                        if !p[i].is_zero() {
                            c[k - d + i] -= &t * &p[i];
                        }
                    }
                }
                c.truncate(d);
                c.resize(d, BigInt::zero());
                self.mk(c, den)
            }
        }
    }

    fn align(&self, a: &Elem, b: &Elem) -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
        if a.den == b.den {
            return (a.c.clone(), b.c.clone(), a.den.clone());
        }
        let l = a.den.lcm(&b.den);
        let fa = &l / &a.den;
        let fb = &l / &b.den;
        (a.c.iter().map(|x| x * &fa).collect(), b.c.iter().map(|x| x * &fb).collect(), l)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let (x, y, den) = self.align(a, b);
        self.normalize(&self.mk(x.into_iter().zip(y).map(|(p, q)| p + q).collect(), den))
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        let (x, y, den) = self.align(a, b);
        self.normalize(&self.mk(x.into_iter().zip(y).map(|(p, q)| p - q).collect(), den))
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.mk(a.c.iter().map(|x| -x).collect(), a.den.clone())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let d = self.inner.d;
        let mut c = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        let e = self.reduce(c, &a.den * &b.den);
        self.normalize(&e)
    }

    pub fn mul_rational(&self, a: &Elem, r: &BigRational) -> Elem {
        self.mul(a, &self.from_rational(r))
    }

    pub fn mul_int(&self, a: &Elem, k: i64) -> Elem {
        let k = BigInt::from(k);
        self.normalize(&self.mk(a.c.iter().map(|x| x * &k).collect(), a.den.clone()))
    }

    pub fn add_int(&self, a: &Elem, k: i64) -> Elem {
        self.add(a, &self.from_int(k))
    }

    pub fn pow(&self, a: &Elem, n: u32) -> Elem {
        let mut r = self.one();
        let mut base = a.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    fn to_qpoly(&self, e: &Elem) -> QPoly {
        QPoly::new(e.c.iter().map(|a| BigRational::new(a.clone(), e.den.clone())).collect())
    }

    fn from_qpoly(&self, q: &QPoly) -> Elem {
        let l = q.coeffs().iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let mut c: Vec<BigInt> = q
            .coeffs()
            .iter()
            .map(|a| (a * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let n = c.len().max(self.inner.d);
        c.resize(n, BigInt::zero());
        let e = self.reduce(c, l);
        self.normalize(&e)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        match &self.inner.kind {
            Kind::Rational { .. } => {
                if a.c[0].is_zero() {
                    return Err(NumericsError::Domain("inverse of zero".into()));
                }
                let (mut n, mut d) = (a.den.clone(), a.c[0].clone());
                if d.is_negative() {
                    n = -n;
                    d = -d;
                }
                Ok(self.normalize(&self.mk(vec![n], d)))
            }
            Kind::Poly { p } => {
                if self.sign(a)? == 0 {
                    return Err(NumericsError::Domain("inverse of zero".into()));
                }
                let pq = IntPoly::new(p.clone()).to_qpoly();
                let (g, s) = self.to_qpoly(a).ext_gcd_left(&pq);
                if g.degree() == 0 {
                    return Ok(self.from_qpoly(&s));
                }
                // a shares a factor with the modulus away from β: invert modulo the cofactor.
                let cof = pq.divrem(&g).0;
                let (g2, s2) = self.to_qpoly(a).ext_gcd_left(&cof);
                debug_assert_eq!(g2.degree(), 0);
                Ok(self.from_qpoly(&s2))
            }
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// β·e − digit, without normalization (the orbit update).
    pub fn apply(&self, e: &Elem, digit: i64) -> Elem {
        match &self.inner.kind {
            Kind::Rational { a, b } => {
                let n = &e.c[0] * a - &e.den * b * digit;
                self.mk(vec![n], &e.den * b)
            }
            Kind::Poly { .. } => {
                let d = self.inner.d;
                let mut shifted = vec![BigInt::zero(); d + 1];
                for (i, x) in e.c.iter().enumerate() {
                    shifted[i + 1] = x.clone();
                }
                shifted[0] -= &e.den * digit;
                self.reduce(shifted, e.den.clone())
            }
        }
    }

    /// Apply the maps T_{d_1}, …, T_{d_k} in order.
    pub fn apply_word(&self, e: &Elem, digits: &[i8]) -> Elem {
        if digits.is_empty() {
            return e.clone();
        }
        match &self.inner.kind {
            Kind::Rational { a, b } => {
                let k = digits.len();
                // N' = a^k N − D Σ d_j a^{k−j} b^j, D' = b^k D.
                let mut s = BigInt::zero();
                let mut bp = BigInt::one();
                for &dj in digits {
                    bp *= b;
                    s = s * a + &bp * BigInt::from(dj);
                }
                let ak = num_traits::pow(a.clone(), k);
                let n = &e.c[0] * ak - &e.den * s;
                self.mk(vec![n], &e.den * bp)
            }
            Kind::Poly { .. } if digits.len() <= 16 || e.size_bits() < 256 => {
                let mut x = e.clone();
                for &dj in digits {
                    x = self.apply(&x, dj as i64);
                }
                x
            }
            Kind::Poly { .. } => {
                // β^k·e + h with h the word applied to zero; keeps work on the large element to one product.
                let h = self.apply_word(&self.zero(), digits);
                let bk = self.pow(&self.gen(), digits.len() as u32);
                self.add(&self.mul(&bk, e), &h)
            }
        }
    }

    /// Preimage of e under T_digit: (e + digit)/β.
    pub fn apply_inverse(&self, e: &Elem, digit: i64) -> Elem {
        let t = self.add_int(e, digit);
        let bi = self.inv(&self.gen()).expect("β is nonzero");
        self.mul(&t, &bi)
    }

    /// Enclosure of the element with roughly `prec` correct bits.
    pub fn enclose(&self, e: &Elem, prec: u32) -> Result<RInterval> {
        match &self.inner.kind {
            Kind::Rational { .. } => Ok(rat_enclosure(&e.c[0], &e.den, prec)),
            Kind::Poly { .. } => {
                let extra = e.c.iter().map(|a| a.bits()).max().unwrap_or(0) as u32;
                let bits = prec + extra + 8;
                let b = self.inner.beta.enclose_with_cap(bits, u32::MAX)?;
                let b = b.with_prec(bits + 16);
                let mut acc = RInterval::from_int(0, bits + 16);
                for a in e.c.iter().rev() {
                    acc = acc.mul(&b).add(&RInterval::from_int(a.clone(), bits + 16));
                }
                let den = RInterval::from_int(e.den.clone(), bits + 16);
                Ok(acc.div(&den).with_prec(prec.max(64)))
            }
        }
    }

    pub fn to_f64(&self, e: &Elem) -> f64 {
        self.enclose(e, 64).map(|i| i.mid_f64()).unwrap_or(f64::NAN)
    }

    fn is_zero_at_beta(&self, e: &Elem) -> bool {
        let Kind::Poly { p } = &self.inner.kind else {
            return e.c[0].is_zero();
        };
        let pq = IntPoly::new(p.clone()).to_qpoly();
        let g = self.to_qpoly(e).gcd(&pq);
        if g.degree() == 0 {
            return false;
        }
        let Some((lo, hi)) = self.inner.beta.isolating_interval() else {
            return false;
        };
        g.to_int_poly().count_roots(&lo, &hi) == Some(1)
    }

    /// Exact sign of the real value of `e`.
    pub fn sign(&self, e: &Elem) -> Result<i32> {
        if e.is_zero() {
            return Ok(0);
        }
        if let Kind::Rational { .. } = self.inner.kind {
            return Ok(if e.c[0].is_positive() { 1 } else { -1 });
        }
        let mut prec = 64u32;
        let mut zero_checked = false;
        loop {
            let iv = self.enclose(e, prec)?;
            if let Some(s) = iv.sign() {
                return Ok(s);
            }
            if !zero_checked {
                zero_checked = true;
                if self.is_zero_at_beta(e) {
                    return Ok(0);
                }
            }
            if prec >= 1 << 22 {
                return Err(NumericsError::BoundaryUndecidable("sign of a field element".into()));
            }
            prec *= 2;
        }
    }

    pub fn cmp(&self, a: &Elem, b: &Elem) -> Result<Ordering> {
        let s = match &self.inner.kind {
            Kind::Rational { .. } => {
                // Cross-multiplication avoids normalizing huge orbit values.
                let l = &a.c[0] * &b.den;
                let r = &b.c[0] * &a.den;
                return Ok(l.cmp(&r));
            }
            Kind::Poly { .. } => self.sign(&self.sub_raw(a, b))?,
        };
        Ok(s.cmp(&0))
    }

    fn sub_raw(&self, a: &Elem, b: &Elem) -> Elem {
        if a.den == b.den {
            return self.mk(a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect(), a.den.clone());
        }
        self.mk(
            a.c.iter().zip(&b.c).map(|(x, y)| x * &b.den - y * &a.den).collect(),
            &a.den * &b.den,
        )
    }
}

/// Outward enclosure of n/d (d > 0) at `prec` bits without forming a reduced rational.
pub fn rat_enclosure(n: &BigInt, d: &BigInt, prec: u32) -> RInterval {
    let keep = prec as u64 + 96;
    let s = d.bits().saturating_sub(keep);
    if s > 0 {
        // Truncate both to about prec + 96 bits: n ∈ [nt, nt+1)·2^s, d ∈ [dt, dt+1)·2^s.
        let nt = n >> s;
        let dt = d >> s;
        let n1 = &nt + 1;
        let d1 = &dt + 1;
        let q = |a: &BigInt, b: &BigInt, dir: Round| Dyadic::from_int(a.clone()).div_round(&Dyadic::from_int(b.clone()), prec, dir);
        let (lo, hi) = if nt.is_negative() {
            (q(&nt, &dt, Round::Down), q(&n1, &d1, Round::Up))
        } else {
            (q(&nt, &d1, Round::Down), q(&n1, &dt, Round::Up))
        };
        return RInterval::from_dyadics(lo, hi, prec);
    }
    let nd = Dyadic::from_int(n.clone());
    let dd = Dyadic::from_int(d.clone());
    RInterval::from_dyadics(nd.div_round(&dd, prec, Round::Down), nd.div_round(&dd, prec, Round::Up), prec)
}
