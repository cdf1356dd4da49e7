use betafibre_numerics::{compare, BetaValue, Cmp3, IntPoly, RInterval};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn arb_rat() -> impl Strategy<Value = BigRational> {
    (-1_000_000i64..1_000_000, 1i64..100_000).prop_map(|(n, d)| rat(n, d))
}

fn enc(r: &BigRational, prec: u32) -> RInterval {
    RInterval::from_rational(r, prec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn arithmetic_contains_exact(a in arb_rat(), b in arb_rat(), prec in 8u32..200) {
        let (x, y) = (enc(&a, prec), enc(&b, prec));
        prop_assert!(x.add(&y).contains_rational(&(&a + &b)));
        prop_assert!(x.sub(&y).contains_rational(&(&a - &b)));
        prop_assert!(x.mul(&y).contains_rational(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(x.div(&y).contains_rational(&(&a / &b)));
        }
    }

    #[test]
    fn powers_contain_exact(a in arb_rat(), n in -6i64..7, prec in 16u32..160) {
        prop_assume!(!a.is_zero() || n >= 0);
        let x = enc(&a, prec);
        let exact = if n >= 0 {
            num_traits::pow(a.clone(), n as usize)
        } else {
            num_traits::pow(a.recip(), (-n) as usize)
        };
        prop_assert!(x.powi(n).contains_rational(&exact));
    }

    #[test]
    fn geometric_tail_contains_exact(num in 101i64..400, n in 0u64..40) {
        let r = rat(num, 100);
        let exact = num_traits::pow(r.recip(), n as usize) / (&r - BigRational::one());
        let t = RInterval::geometric_tail(&enc(&r, 96), n).unwrap();
        prop_assert!(t.contains_rational(&exact));
    }

    #[test]
    fn compare_is_antisymmetric(a in arb_rat(), b in arb_rat(), pa in 4u32..64, pb in 4u32..64) {
        let (x, y) = (enc(&a, pa), enc(&b, pb));
        let none = None::<fn(u32) -> Option<(RInterval, RInterval)>>;
        let none2 = None::<fn(u32) -> Option<(RInterval, RInterval)>>;
        let ab = compare(&x, &y, none, 4);
        let ba = compare(&y, &x, none2, 4);
        prop_assert_eq!(ab, ba.reverse());
        if ab == Cmp3::Less {
            prop_assert!(a < b);
        }
    }
}

#[test]
fn refinement_keeps_the_sign_change() {
    let p = IntPoly::parse("x^3-x^2-1").unwrap();
    let b = BetaValue::parse("poly:x^3-x^2-1:[1.4,1.5]").unwrap();
    let mut prev: Option<RInterval> = None;
    for bits in [10u32, 40, 100, 400, 1500, 4000] {
        let e = b.enclose_bits(bits).unwrap();
        let lo = p.eval_dyadic(e.lo_fin().unwrap());
        let hi = p.eval_dyadic(e.hi_fin().unwrap());
        assert!(lo.signum() < 0 && hi.signum() > 0, "sign change lost at {bits} bits");
        if let Some(pr) = prev {
            assert!(pr.contains(&e));
        }
        prev = Some(e);
    }
}

#[test]
fn compare_resolves_close_values_with_refiner() {
    let b = BetaValue::parse("poly:x^3-x^2-1:[1.4,1.5]").unwrap();
    let c = rat(14656, 10000);
    let coarse = b.enclose_bits(8).unwrap();
    let r = compare(
        &coarse,
        &enc(&c, 8),
        Some(|k: u32| Some((b.enclose_bits(16 << k).unwrap(), enc(&c, 16 << k)))),
        8,
    );
    assert_eq!(r, Cmp3::Less);
}
