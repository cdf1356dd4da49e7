//! The canonical intervals I, S, O, 𝓘, 𝓙 for both alphabets.

use std::cmp::Ordering;

use betafibre_numerics::{BetaValue, Elem, Field, RInterval};

use crate::error::Result;
use crate::word::Alphabet;

/// Exact endpoints in Q(β) for one alphabet.
#[derive(Clone, Debug)]
pub struct ExactBase {
    pub field: Field,
    pub alphabet: Alphabet,
    /// Fixed points of T_low and T_1: the ends of the expansion domain.
    pub fix_low: Elem,
    pub fix_high: Elem,
    pub s_lo: Elem,
    pub s_hi: Elem,
    pub o_lo: Elem,
    pub o_hi: Elem,
    pub ci_lo: Elem,
    pub ci_hi: Elem,
    pub cj_lo: Elem,
    pub cj_hi: Elem,
}

impl ExactBase {
    pub fn new(beta: &BetaValue, alphabet: Alphabet) -> Result<ExactBase> {
        let f = Field::new(beta)?;
        ExactBase::with_field(f, alphabet)
    }

    pub fn with_field(f: Field, alphabet: Alphabet) -> Result<ExactBase> {
        let b = f.gen();
        let one = f.one();
        let bm1 = f.sub(&b, &one);
        let b2m1 = f.sub(&f.mul(&b, &b), &one);
        let c = f.inv(&bm1)?;
        let inv_b = f.inv(&b)?;
        let inv_b2m1 = f.inv(&b2m1)?;
        let half = f.from_rational(&num_rational::BigRational::new(1.into(), 2.into()));
        // ZeroOne endpoints first.
        let s_lo = inv_b.clone();
        let s_hi = f.mul(&inv_b, &c);
        let o_lo = inv_b2m1.clone();
        let o_hi = f.mul(&b, &inv_b2m1);
        let ci_lo = f.mul(&half, &f.add(&s_lo, &o_lo));
        let ci_hi = f.mul(&half, &f.add(&o_hi, &s_hi));
        let cj_lo = f.sub(&f.mul(&b, &ci_lo), &one);
        let cj_hi = f.mul(&b, &ci_hi);
        let zero = f.zero();
        let mut e = ExactBase {
            field: f.clone(),
            alphabet: Alphabet::ZeroOne,
            fix_low: zero,
            fix_high: c,
            s_lo,
            s_hi,
            o_lo,
            o_hi,
            ci_lo,
            ci_hi,
            cj_lo,
            cj_hi,
        };
        if alphabet == Alphabet::PlusMinus {
            let conj = |x: &Elem| e.to_plus_minus(x);
            e = ExactBase {
                field: f.clone(),
                alphabet,
                fix_low: conj(&e.fix_low),
                fix_high: conj(&e.fix_high),
                s_lo: conj(&e.s_lo),
                s_hi: conj(&e.s_hi),
                o_lo: conj(&e.o_lo),
                o_hi: conj(&e.o_hi),
                ci_lo: conj(&e.ci_lo),
                ci_hi: conj(&e.ci_hi),
                cj_lo: conj(&e.cj_lo),
                cj_hi: conj(&e.cj_hi),
            };
        }
        Ok(e)
    }

    pub fn beta(&self) -> &BetaValue {
        self.field.beta()
    }

    /// The conjugacy x ↦ 2x − 1/(β−1) taking the {0,1} dynamics to the {−1,1} dynamics.
    pub fn to_plus_minus(&self, x: &Elem) -> Elem {
        let f = &self.field;
        let c = f.inv(&f.add_int(&f.gen(), -1)).expect("β ≠ 1");
        f.sub(&f.mul_int(x, 2), &c)
    }

    /// Reflection fix_low + fix_high − x, which swaps the roles of the two maps.
    pub fn mirror(&self, x: &Elem) -> Elem {
        let f = &self.field;
        f.sub(&f.add(&self.fix_low, &self.fix_high), x)
    }

    pub fn cmp(&self, a: &Elem, b: &Elem) -> Result<Ordering> {
        Ok(self.field.cmp(a, b)?)
    }

    pub fn in_o(&self, x: &Elem) -> Result<bool> {
        Ok(self.cmp(x, &self.o_lo)? != Ordering::Less && self.cmp(x, &self.o_hi)? != Ordering::Greater)
    }

    /// Strictly inside the open expansion domain.
    pub fn in_open_domain(&self, x: &Elem) -> Result<bool> {
        Ok(self.cmp(x, &self.fix_low)? == Ordering::Greater && self.cmp(x, &self.fix_high)? == Ordering::Less)
    }

    pub fn enclosures(&self, prec: u32) -> Result<CanonicalIntervals> {
        let e = |x: &Elem| self.field.enclose(x, prec);
        Ok(CanonicalIntervals {
            alphabet: self.alphabet,
            i: (e(&self.fix_low)?, e(&self.fix_high)?),
            s: (e(&self.s_lo)?, e(&self.s_hi)?),
            o: (e(&self.o_lo)?, e(&self.o_hi)?),
            cal_i: (e(&self.ci_lo)?, e(&self.ci_hi)?),
            cal_j: (e(&self.cj_lo)?, e(&self.cj_hi)?),
        })
    }

    /// β < φ, decided exactly via β² − β − 1 < 0.
    pub fn below_golden(&self) -> Result<bool> {
        let f = &self.field;
        let b = f.gen();
        let q = f.add_int(&f.sub(&f.mul(&b, &b), &b), -1);
        Ok(f.sign(&q)? < 0)
    }
}

/// Endpoint enclosures of the canonical intervals.
#[derive(Clone, Debug)]
pub struct CanonicalIntervals {
    pub alphabet: Alphabet,
    pub i: (RInterval, RInterval),
    pub s: (RInterval, RInterval),
    pub o: (RInterval, RInterval),
    pub cal_i: (RInterval, RInterval),
    pub cal_j: (RInterval, RInterval),
}

impl CanonicalIntervals {
    /// Exact when β is algebraic, interval arithmetic otherwise.
    pub fn new(beta: &BetaValue, alphabet: Alphabet) -> Result<CanonicalIntervals> {
        if beta.is_algebraic() {
            return ExactBase::new(beta, alphabet)?.enclosures(128);
        }
        let b = beta.enclose_bits(120)?;
        let one = RInterval::from_int(1, b.prec());
        let half = RInterval::from_int(1, b.prec()).div(&RInterval::from_int(2, b.prec()));
        let bm1 = b.sub(&one);
        let c = one.div(&bm1);
        let b2m1 = b.mul(&b).sub(&one);
        let s = (one.div(&b), one.div(&b.mul(&bm1)));
        let o = (one.div(&b2m1), b.div(&b2m1));
        let ci = (half.mul(&s.0.add(&o.0)), half.mul(&o.1.add(&s.1)));
        let cj = (b.mul(&ci.0).sub(&one), b.mul(&ci.1));
        let zero = RInterval::from_int(0, b.prec());
        let mut r = CanonicalIntervals { alphabet: Alphabet::ZeroOne, i: (zero, c.clone()), s, o, cal_i: ci, cal_j: cj };
        if alphabet == Alphabet::PlusMinus {
            let t = |x: &RInterval| x.mul_int(2).sub(&c);
            r = CanonicalIntervals {
                alphabet,
                i: (t(&r.i.0), t(&r.i.1)),
                s: (t(&r.s.0), t(&r.s.1)),
                o: (t(&r.o.0), t(&r.o.1)),
                cal_i: (t(&r.cal_i.0), t(&r.cal_i.1)),
                cal_j: (t(&r.cal_j.0), t(&r.cal_j.1)),
            };
        }
        Ok(r)
    }

    /// Hull of the endpoint enclosures of O.
    pub fn o_hull(&self) -> RInterval {
        self.o.0.hull(&self.o.1)
    }

    /// Certified O ⊊ 𝓘 ⊊ S and 𝓙 ⊆ (fix_low, fix_high), the picture for β < φ.
    pub fn nesting_certified(&self) -> bool {
        use betafibre_numerics::Cmp3::*;
        let lt = |a: &RInterval, b: &RInterval| a.cmp3(b) == Less;
        lt(&self.s.0, &self.cal_i.0)
            && lt(&self.cal_i.0, &self.o.0)
            && lt(&self.o.1, &self.cal_i.1)
            && lt(&self.cal_i.1, &self.s.1)
            && lt(&self.i.0, &self.cal_j.0)
            && lt(&self.cal_j.1, &self.i.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_cubic_o_interval() {
        let b = BetaValue::parse("poly:x^3-x^2-1:[1.4,1.5]").unwrap();
        let ci = CanonicalIntervals::new(&b, Alphabet::ZeroOne).unwrap();
        assert!((ci.o.0.mid_f64() - 0.8711568).abs() < 1e-6);
        assert!((ci.o.1.mid_f64() - 1.2767423).abs() < 1e-6);
        assert!(ci.nesting_certified());
        let pm = CanonicalIntervals::new(&b, Alphabet::PlusMinus).unwrap();
        assert!((pm.o.0.mid_f64() + 0.405586).abs() < 1e-6);
        assert!((pm.o.1.mid_f64() - 0.405586).abs() < 1e-6);
        assert!(pm.nesting_certified());
    }

    #[test]
    fn nesting_fails_above_golden() {
        let b = BetaValue::parse("1.7").unwrap();
        let ci = CanonicalIntervals::new(&b, Alphabet::ZeroOne).unwrap();
        assert!(!ci.nesting_certified());
        assert!(!ExactBase::new(&b, Alphabet::ZeroOne).unwrap().below_golden().unwrap());
    }
}
