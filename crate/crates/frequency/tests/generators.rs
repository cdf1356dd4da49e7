use std::sync::Arc;

use betafibre_expansion::Alphabet;
use betafibre_frequency::*;
use betafibre_numerics::{BetaValue, Field};
use betafibre_synthesis::build_partition_table;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn cubic() -> BetaValue {
    BetaValue::parse("poly:x^3-x^2-1:[1.4,1.5]").unwrap()
}

/// Σ_{i=l+1}^{r} ε_i a^{r−i} b^{i−l}, with a^{r−l} and b^{r−l}.
fn weighted(eps: &[i8], a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if eps.len() == 1 {
        return (BigInt::from(eps[0]) * b, a.clone(), b.clone());
    }
    let m = eps.len() / 2;
    let (s1, a1, b1) = weighted(&eps[..m], a, b);
    let (s2, a2, b2) = weighted(&eps[m..], a, b);
    (s1 * &a2 + &b1 * s2, a1 * a2, b1 * b2)
}

/// β^N(x − Σ_{i≤N} ε_i β^{-i}) for rational β = a/b and rational x, exactly.
fn remainder(x: &BigRational, beta: &BigRational, eps: &[i8]) -> BigRational {
    let (a, b) = (beta.numer().clone(), beta.denom().clone());
    let (s, an, bn) = weighted(eps, &a, &b);
    (x * BigRational::from_integer(an) - BigRational::from_integer(s)) / BigRational::from_integer(bn)
}

/// Partial-sum identity at every n ≤ N follows from the remainder at N lying in the domain.
fn assert_partial_sums(x: &BigRational, beta: &BigRational, eps: &[i8], alphabet: Alphabet) {
    let c = BigRational::one() / (beta - BigRational::one());
    let rem = remainder(x, beta, eps);
    let lo = if alphabet == Alphabet::PlusMinus { -c.clone() } else { BigRational::zero() };
    assert!(rem >= lo && rem <= c, "remainder {rem} outside the domain");
}

/// Recount low digits after λ⁰ at every checkpoint and check the frequency bound exactly.
fn assert_frequency_certificates(s: &ExpansionStream, p: &BigRational, n_beta: usize) {
    let lambda0 = s.lambda0_len();
    let low = s.alphabet().low();
    let d = s.digits();
    let mut count = 0u64;
    let mut pos = lambda0;
    for cp in s.checkpoints() {
        while pos < cp.checkpoint as usize {
            if d[pos] == low {
                count += 1;
            }
            pos += 1;
        }
        assert_eq!(count, cp.count0);
        let len = (cp.checkpoint as usize - lambda0) as i64;
        let dev = (BigRational::from_integer(count.into()) - p * BigRational::from_integer(len.into())).abs();
        assert!(dev <= BigRational::from_integer(n_beta.into()), "deviation {dev} at {}", cp.checkpoint);
    }
}

#[test]
fn frequency_half_for_the_cubic_base() {
    let b = cubic();
    let mut s = frequency_expansion(&r(1, 2), &b, &r(1, 2), Alphabet::ZeroOne).unwrap();
    s.generate(100_000).unwrap();
    assert_frequency_certificates(&s, &r(1, 2), 8);
    assert!(s.checkpoints().iter().all(|c| c.bound == 8.0));
}

#[test]
fn frequency_at_upper_window_edge_converges() {
    let b = cubic();
    let p = r(9, 16);
    let mut s = frequency_expansion(&r(1, 2), &b, &p, Alphabet::ZeroOne).unwrap();
    let n = 100_000;
    s.generate(n).unwrap();
    assert_frequency_certificates(&s, &p, 8);
    let zeros = s.digits()[s.lambda0_len()..n].iter().filter(|&&d| d == 0).count();
    let freq = zeros as f64 / (n - s.lambda0_len()) as f64;
    assert!((freq - 9.0 / 16.0).abs() < 1e-3, "{freq}");
}

#[test]
fn frequency_partial_sums_for_rational_bases() {
    for (spec, beta) in [("1.3", r(13, 10)), ("1.55", r(31, 20))] {
        let b = BetaValue::parse(spec).unwrap();
        let table = Arc::new(build_partition_table(&b, Alphabet::ZeroOne).unwrap());
        let (lo, hi) = frequency_window(&table);
        for (x, p) in [(r(1, 3), lo.clone()), (r(3, 2), hi.clone()), (r(7, 5), r(1, 2))] {
            let mut s = frequency_expansion_with_table(&x, table.clone(), &p).unwrap();
            s.generate(20_000).unwrap();
            assert_frequency_certificates(&s, &p, table.n_beta);
            for n in [1, 17, 999, 20_000] {
                assert_partial_sums(&x, &beta, &s.digits()[..n], Alphabet::ZeroOne);
            }
        }
    }
}

#[test]
fn frequency_domain_errors() {
    let b = BetaValue::parse("1.5").unwrap();
    // 1/(β−1) = 2 is excluded.
    let e = frequency_expansion(&r(2, 1), &b, &r(1, 2), Alphabet::ZeroOne).err().unwrap();
    assert!(matches!(e, FrequencyError::Domain(_)));
    let e = frequency_expansion(&r(1, 2), &cubic(), &r(10, 16), Alphabet::ZeroOne).err().unwrap();
    assert!(matches!(e, FrequencyError::Domain(_)));
    let e = frequency_expansion(&r(1, 2), &BetaValue::parse("1.7").unwrap(), &r(1, 2), Alphabet::ZeroOne).err();
    assert!(e.is_some());
}

#[test]
fn accumulation_alternating_targets() {
    let b = cubic();
    let mut s = accumulation_expansion(&r(1, 2), &b, Schedule::Cycle(vec![r(29, 64), r(35, 64)]), Alphabet::ZeroOne)
        .unwrap();
    s.generate(100_000).unwrap();
    let lambda0 = s.lambda0_len();
    let recs: Vec<_> = s.checkpoints().iter().filter(|c| c.target.is_some()).collect();
    let mut seen = [0, 0];
    for (k, c) in recs.iter().enumerate() {
        let y = c.target.clone().unwrap();
        assert_eq!(y, if k % 2 == 0 { r(29, 64) } else { r(35, 64) });
        let n = c.checkpoint as usize;
        let zeros = s.digits()[lambda0..n].iter().filter(|&&d| d == 0).count() as i64;
        let dev = (BigRational::from_integer(zeros.into()) - &y * BigRational::from_integer(((n - lambda0) as i64).into())).abs();
        assert!(dev <= r(8, 1));
        seen[k % 2] += 1;
    }
    assert!(seen[0] >= 3 && seen[1] >= 3, "{seen:?}");
    // Records keep coming at ever larger indices, so the running frequency gets within 8/nₖ of each target.
    assert!(recs.windows(2).all(|w| w[0].checkpoint < w[1].checkpoint));
    assert!(recs.last().unwrap().checkpoint > 10_000);
}

#[test]
fn accumulation_with_constant_target_matches_frequency() {
    let b = cubic();
    let mut a = accumulation_expansion(&r(1, 3), &b, Schedule::Cycle(vec![r(1, 2)]), Alphabet::ZeroOne).unwrap();
    let mut f = frequency_expansion(&r(1, 3), &b, &r(1, 2), Alphabet::ZeroOne).unwrap();
    a.generate(5000).unwrap();
    f.generate(5000).unwrap();
    assert_eq!(a.digits()[..5000], f.digits()[..5000]);
    assert!(a.checkpoints().iter().all(|c| c.target == Some(r(1, 2))));
}

#[test]
fn accumulation_rejects_boundary_targets() {
    let b = cubic();
    let e = accumulation_expansion(&r(1, 2), &b, Schedule::Cycle(vec![r(9, 16)]), Alphabet::ZeroOne).err().unwrap();
    assert!(matches!(e, FrequencyError::Schedule(_)));
}

#[test]
fn dyadic_schedule_repeats_every_interior_dyadic() {
    let it = ScheduleIter::new(Schedule::Dyadic, 8).unwrap();
    let ts: Vec<BigRational> = it.take(200).collect();
    for t in &ts {
        assert!(*t > r(7, 16) && *t < r(9, 16));
    }
    for y in [r(1, 2), r(15, 32), r(33, 64)] {
        assert!(ts.iter().filter(|t| **t == y).count() >= 2, "{y}");
    }
    let mut acc = accumulation_expansion(&r(1, 2), &cubic(), Schedule::Dyadic, Alphabet::ZeroOne).unwrap();
    acc.generate(20_000).unwrap();
    assert!(acc.checkpoints().iter().filter(|c| c.target.is_some()).count() >= 3);
}

/// Maximum of |#0 − #1| over prefixes after λ⁰.
fn max_imbalance(s: &ExpansionStream) -> u64 {
    let mut d = 0i64;
    let mut m = 0u64;
    for &x in &s.digits()[s.lambda0_len()..] {
        d += if x == 0 { 1 } else { -1 };
        m = m.max(d.unsigned_abs());
    }
    m
}

#[test]
fn simply_normal_balance() {
    let b = BetaValue::parse("1.75").unwrap();
    let nc = normal_constants(&b).unwrap();
    assert_eq!(nc.m, 1);
    let mut s = simply_normal_expansion(&r(2, 5), &b).unwrap();
    s.generate(100_000).unwrap();
    assert!(max_imbalance(&s) <= nc.bound, "{} > {}", max_imbalance(&s), nc.bound);
    assert_partial_sums(&r(2, 5), &r(7, 4), &s.digits()[..100_000], Alphabet::ZeroOne);
}

#[test]
fn simply_normal_at_golden_ratio_uses_first_rung() {
    let phi = betafibre_thuemorse::ladder_rung(1).unwrap();
    assert_eq!(normal_constants(&phi).unwrap().m, 1);
    let mut s = simply_normal_expansion(&r(3, 10), &phi).unwrap();
    s.generate(20_000).unwrap();
    assert!(max_imbalance(&s) <= normal_constants(&phi).unwrap().bound);
}

#[test]
fn marked_point_emits_thue_morse_tail() {
    let phi = betafibre_thuemorse::ladder_rung(1).unwrap();
    let f = Field::new(&phi).unwrap();
    let a1 = betafibre_thuemorse::periodic_value(&f, &[0, 1]).unwrap();
    let mut s = simply_normal_expansion_elem(&a1, &phi, MarkedPolicy::EmitTail).unwrap();
    let d = s.take(40).unwrap();
    assert_eq!(s.lambda0_len(), 0);
    assert!(d.chunks(2).all(|c| c == [0, 1]), "{d:?}");
    let e = simply_normal_expansion_elem(&a1, &phi, MarkedPolicy::Error).unwrap().take(4).err().unwrap();
    assert!(matches!(e, FrequencyError::PreimageOfMarkedPoint { level: 1, .. }));
}

#[test]
fn hybrid_zero_and_small_target() {
    let b = BetaValue::parse("1.5").unwrap();
    let table = Arc::new(build_partition_table(&b, Alphabet::PlusMinus).unwrap());
    let n_beta = table.n_beta as f64;
    for x in [r(0, 1), r(1, 20)] {
        if x > BigRational::new(1.into(), BigInt::from(table.n_beta)) {
            continue;
        }
        let mut s = hybrid_expansion_with_table(&x, table.clone()).unwrap();
        let n = 100_000;
        s.generate(n).unwrap();
        assert_eq!(s.lambda0_len(), 0);
        let xf = x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();
        let mut sum = 0i64;
        let mut pos = 0;
        for cp in s.checkpoints() {
            while pos < cp.checkpoint as usize {
                sum += s.digits()[pos] as i64;
                pos += 1;
            }
            assert!((sum as f64 - pos as f64 * xf).abs() <= 2.0 * n_beta + 1e-9);
        }
        assert_partial_sums(&x, &r(3, 2), &s.digits()[..n], Alphabet::PlusMinus);
        let avg = s.digits()[..n].iter().map(|&d| d as f64).sum::<f64>() / n as f64;
        assert!((avg - xf).abs() < (2.0 * n_beta + 2.0) / n as f64);
    }
}

#[test]
fn hybrid_rejects_large_targets() {
    let b = BetaValue::parse("1.5").unwrap();
    let e = hybrid_expansion(&r(2, 1), &b).err().unwrap();
    assert!(matches!(e, FrequencyError::Domain(_)));
    let e = hybrid_expansion(&r(1, 4), &b).err().unwrap();
    assert!(matches!(e, FrequencyError::Domain(_)));
}

#[test]
fn slow_growth_square_root() {
    let b = BetaValue::parse("1.5").unwrap();
    let table = Arc::new(build_partition_table(&b, Alphabet::PlusMinus).unwrap());
    let c = slow_growth_constant(table.n_beta) as f64;
    for (x, n) in [(r(7, 10), 1_000_000usize), (r(0, 1), 100_000)] {
        let mut s = slow_growth_expansion_with_table(&x, table.clone(), GrowthFunction::sqrt()).unwrap();
        s.generate(n).unwrap();
        let start = s.checkpoints().iter().find(|cp| cp.bound.is_finite()).expect("settles").checkpoint as usize;
        assert!(start < 10_000, "first sign change at {start}");
        let xf = x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();
        let mut sum = 0i64;
        let mut worst = 0f64;
        for (i, &d) in s.digits()[..n].iter().enumerate() {
            sum += d as i64;
            if i + 1 >= start {
                worst = worst.max((sum as f64 - ((i + 1) as f64).sqrt() * xf).abs());
            }
        }
        assert!(worst <= c, "{worst} > {c}");
        assert_partial_sums(&x, &r(3, 2), &s.digits()[..n.min(200_000)], Alphabet::PlusMinus);
    }
}

#[test]
fn slow_growth_linear_violates_increment_bound() {
    let b = BetaValue::parse("1.5").unwrap();
    let e = slow_growth_expansion(&r(1, 2), &b, GrowthFunction::linear(BigRational::one())).err().unwrap();
    assert!(matches!(e, FrequencyError::GrowthViolation { .. }));
}

#[test]
fn streams_are_deterministic_and_serialize() {
    let b = cubic();
    let mut s1 = frequency_expansion(&r(2, 7), &b, &r(15, 32), Alphabet::PlusMinus).unwrap();
    let mut s2 = frequency_expansion(&r(2, 7), &b, &r(15, 32), Alphabet::PlusMinus).unwrap();
    assert_eq!(s1.take(3000).unwrap(), s2.take(3000).unwrap());
    let mut out = Vec::new();
    s1.write_digits(170, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.iter().map(|l| l.len()).collect::<Vec<_>>(), vec![80, 80, 10]);
    assert!(text.chars().all(|c| c == '+' || c == '-' || c == '\n'));
    let mut log = Vec::new();
    s1.write_certificates(3000, &mut log).unwrap();
    let first: serde_json::Value = serde_json::from_str(String::from_utf8(log).unwrap().lines().next().unwrap()).unwrap();
    for k in ["checkpoint", "count0", "count1", "bound"] {
        assert!(first.get(k).is_some(), "{k}");
    }
    assert_eq!(s2.next_digit().unwrap(), s1.digits()[0]);
}
