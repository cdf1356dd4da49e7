use betafibre_expansion::{Alphabet, ExactBase};
use betafibre_numerics::{BetaValue, RInterval};
use betafibre_synthesis::*;
use num_rational::BigRational;

fn cubic() -> BetaValue {
    BetaValue::parse("poly:x^3-x^2-1:[1.4,1.5]").unwrap()
}

const BSTAR: f64 = 1.465_571_231_876_768;

fn words(t: &DirectionTable) -> Vec<String> {
    t.words.iter().map(|w| w.to_string()).collect()
}

fn ends(t: &DirectionTable) -> Vec<f64> {
    t.bounds.iter().map(|b| b.enclosure.mid_f64()).collect()
}

/// Plain floating-point restatement of the construction, used as an oracle.
fn float_omega(b: f64, x: f64) -> Vec<i8> {
    let l = 1.0 / (b * b - 1.0);
    let ci = 0.5 * (1.0 / b + l);
    let ap = |w: &[i8]| w.iter().fold(x, |v, &d| b * v - d as f64);
    let run = |w: &mut Vec<i8>, budget: usize| -> Option<usize> {
        let mut i = 0;
        while ap(w) < l {
            w.push(0);
            i += 1;
            if w.len() > budget {
                return None;
            }
        }
        Some(i)
    };
    let lp = |mut w: Vec<i8>, budget: usize| -> Option<Vec<i8>> {
        loop {
            w.push(1);
            let i = run(&mut w, budget)?;
            if i > 1 {
                return Some(w);
            }
        }
    };
    let w2 = |budget: usize| -> Option<Vec<i8>> {
        if b * x - 1.0 <= 1.0 / b {
            return None;
        }
        let mut w = vec![1, 1];
        let i = run(&mut w, budget)?;
        if i > 2 {
            return Some(w);
        }
        lp(w, budget)
    };
    if b * x - 1.0 >= ci {
        return w2(1000).unwrap();
    }
    let a = lp(Vec::new(), 1000).unwrap();
    match w2(a.len()) {
        Some(c) if c.len() <= a.len() => c,
        _ => a,
    }
}

#[test]
fn golden_cubic_table_words() {
    let t = build_partition_table(&cubic(), Alphabet::ZeroOne).unwrap();
    assert_eq!(
        words(&t.zero_heavy),
        [
            "(T1,T0,T0,T0)",
            "(T1,T0,T0)",
            "(T1,T0,T1,T0,T0,T0)",
            "(T1,T0,T1,T0,T0)",
            "(T1,T1,T0,T0,T0,T0,T0,T0)",
            "(T1,T1,T0,T0,T0,T0,T0)",
            "(T1,T1,T0,T0,T0,T0)",
        ]
    );
    assert_eq!(
        words(&t.one_heavy),
        [
            "(T0,T0,T1,T1,T1,T1)",
            "(T0,T0,T1,T1,T1,T1,T1)",
            "(T0,T0,T1,T1,T1,T1,T1,T1)",
            "(T0,T1,T0,T1,T1)",
            "(T0,T1,T0,T1,T1,T1)",
            "(T0,T1,T1)",
            "(T0,T1,T1,T1)",
        ]
    );
    assert_eq!(t.n_beta, 8);
}

/// Switch points recomputed in floating point from their closed forms.
#[test]
fn golden_cubic_table_endpoints() {
    let b = BSTAR;
    let l = 1.0 / (b * b - 1.0);
    let r = b / (b * b - 1.0);
    let ci = 0.5 * (1.0 / b + l);
    let expect = [
        l,
        (l / (b * b) + 1.0) / b,         // T₀²T₁ x = L
        (l / b + 1.0) / b,               // T₀T₁ x = L
        ((l / (b * b * b) + 1.0) / b / b + 1.0) / b, // T₀³T₁T₀T₁ x = L on the T₀T₁ branch
        (ci + 1.0) / b,
        ((l / b.powi(5) + 1.0) / b + 1.0) / b,
        ((l / b.powi(4) + 1.0) / b + 1.0) / b,
        r,
    ];
    let t = build_partition_table(&cubic(), Alphabet::ZeroOne).unwrap();
    let got = ends(&t.zero_heavy);
    let want_true = [0.8711568, 0.9590701, 1.0879133, 1.1288432, 1.1888290, 1.2078847, 1.2358124, 1.2767423];
    for i in 0..8 {
        assert!((got[i] - want_true[i]).abs() < 5e-7, "endpoint {i}: {} vs {}", got[i], want_true[i]);
    }
    // Closed forms where the switch is a pure re-entry condition.
    for &i in &[0usize, 1, 2, 5, 6, 7] {
        assert!((got[i] - expect[i]).abs() < 1e-12, "closed form {i}: {} vs {}", got[i], expect[i]);
    }
    // One-heavy cells are the reflections x ↦ 1/(β−1) − x.
    let c = 1.0 / (b - 1.0);
    let oh = ends(&t.one_heavy);
    for i in 0..8 {
        assert!((oh[i] - (c - got[7 - i])).abs() < 1e-12);
    }
}

#[test]
fn golden_cubic_plus_minus_table() {
    let t = build_partition_table(&cubic(), Alphabet::PlusMinus).unwrap();
    let got = ends(&t.zero_heavy);
    let want = [-0.405586, -0.229759, 0.027928, 0.109787, 0.229759, 0.267870, 0.323726, 0.405586];
    for i in 0..8 {
        assert!((got[i] - want[i]).abs() < 1e-6, "{i}: {}", got[i]);
    }
    assert_eq!(t.zero_heavy.words[0].to_string(), "(T1,T-1,T-1,T-1)");
    assert_eq!(t.one_heavy.words[6].to_string(), "(T-1,T1,T1,T1)");
    assert_eq!(t.n_beta, 8);
}

#[test]
fn point_examples() {
    let b = cubic();
    let w = synthesize_omega(&RInterval::from_f64(0.90, 128), &b, Direction::ZeroHeavy, Alphabet::ZeroOne).unwrap();
    assert_eq!(w.compact(), "1,0,0,0");
    let w = synthesize_omega(&RInterval::from_f64(1.00, 128), &b, Direction::ZeroHeavy, Alphabet::ZeroOne).unwrap();
    assert_eq!(w.compact(), "1,0,0");
    let w = synthesize_omega(&RInterval::from_f64(1.00, 128), &b, Direction::OneHeavy, Alphabet::ZeroOne).unwrap();
    assert_eq!(w.compact(), "0,1,0,1,1");
    assert!(synthesize_omega(&RInterval::from_f64(0.5, 128), &b, Direction::ZeroHeavy, Alphabet::ZeroOne).is_err());
    let phi = BetaValue::parse("poly:x^2-x-1:[1.5,1.7]").unwrap();
    assert!(synthesize_omega(&RInterval::from_f64(1.0, 128), &phi, Direction::ZeroHeavy, Alphabet::ZeroOne).is_err());
}

#[test]
fn exact_and_interval_synthesis_agree() {
    let b = cubic();
    let base = ExactBase::new(&b, Alphabet::ZeroOne).unwrap();
    for k in 0..40 {
        let x = BigRational::new((872 + 10 * k).into(), 1000.into());
        let e = base.field.from_rational(&x);
        for d in [Direction::ZeroHeavy, Direction::OneHeavy] {
            let a = synthesize_omega_exact(&base, &e, d).unwrap();
            let i = synthesize_omega(&RInterval::from_rational(&x, 256), &b, d, Alphabet::ZeroOne).unwrap();
            assert_eq!(a, i);
        }
    }
}

/// Breadth-first search over all {T₀,T₁} words up to length 12 returning the midpoint of O to O
/// with more T₀ than T₁; the synthesized word must be one of them.
#[test]
fn bfs_oracle_at_midpoint() {
    let bv = BetaValue::parse("1.3").unwrap();
    let b = 1.3f64;
    let l = 1.0 / (b * b - 1.0);
    let r = b / (b * b - 1.0);
    let x = 0.5 * (l + r);
    let mut good = Vec::new();
    let mut frontier: Vec<(Vec<i8>, f64)> = vec![(vec![], x)];
    for _ in 0..12 {
        let mut next = Vec::new();
        for (w, v) in &frontier {
            for d in [0i8, 1] {
                let nv = b * v - d as f64;
                if !(-1e-9..=1.0 / (b - 1.0) + 1e-9).contains(&nv) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(d);
                let z = nw.iter().filter(|&&d| d == 0).count();
                if nv >= l - 1e-12 && nv <= r + 1e-12 && 2 * z > nw.len() {
                    good.push(nw.clone());
                }
                next.push((nw, nv));
            }
        }
        frontier = next;
    }
    let w = synthesize_omega(&RInterval::from_f64(x, 128), &bv, Direction::ZeroHeavy, Alphabet::ZeroOne).unwrap();
    assert!(good.iter().any(|g| g.as_slice() == w.maps()), "{w} not admissible");
    let t = build_partition_table(&bv, Alphabet::ZeroOne).unwrap();
    assert!(w.len() <= t.n_beta);
}

fn check_against_float(spec: &str, bf: f64, expected_n: usize) {
    let beta = BetaValue::parse(spec).unwrap();
    let t = build_partition_table(&beta, Alphabet::ZeroOne).unwrap();
    assert_eq!(t.n_beta, expected_n, "n for {spec}");
    let base = &t.base;
    let l = 1.0 / (bf * bf - 1.0);
    let r = bf / (bf * bf - 1.0);
    let n = 4000;
    for k in 0..=n {
        let x = BigRational::new((k as i64).into(), (n as i64).into());
        let xf = l + (r - l) * k as f64 / n as f64;
        let ex = base.field.add(&base.o_lo, &base.field.mul_rational(&base.field.sub(&base.o_hi, &base.o_lo), &x));
        let w = t.lookup(Direction::ZeroHeavy, &ex, None).unwrap();
        let i = t.locate(Direction::ZeroHeavy, &ex, None).unwrap();
        let (lo, hi, _) = t.zero_heavy.cell(i);
        // Away from cell edges the float oracle must agree.
        if (xf - lo.enclosure.mid_f64()).abs() > 1e-9 && (xf - hi.enclosure.mid_f64()).abs() > 1e-9 {
            assert_eq!(w.maps(), float_omega(bf, xf).as_slice(), "{spec} at {xf}");
        }
    }
}

#[test]
fn float_oracle_agrees_on_several_bases() {
    check_against_float("1.3", 1.3, 7);
    check_against_float("1.55", 1.55, 10);
    check_against_float("1.2", 1.2, 9);
    check_against_float("poly:x^3-x^2-1:[1.4,1.5]", BSTAR, 8);
}

#[test]
fn near_golden_table_exists() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let s = format!("{:.17}", phi - 1e-3);
    let beta = BetaValue::parse(&format!("dec:{s}")).unwrap();
    let t = build_partition_table(&beta, Alphabet::ZeroOne).unwrap();
    assert!(t.n_beta >= 8 && t.n_beta < 100, "n = {}", t.n_beta);
    // Independent floating-point spot check of every cell at its midpoint.
    let b = beta.to_f64();
    let (l, r) = (1.0 / (b * b - 1.0), b / (b * b - 1.0));
    for d in [Direction::ZeroHeavy, Direction::OneHeavy] {
        let tb = t.table(d);
        for i in 0..tb.len() {
            let (lo, hi, w) = tb.cell(i);
            let x = 0.5 * (lo.enclosure.mid_f64() + hi.enclosure.mid_f64());
            let v = w.maps().iter().fold(x, |v, &d| b * v - d as f64);
            assert!(v >= l - 1e-9 && v <= r + 1e-9);
            let z = w.count(0);
            assert!(if d == Direction::ZeroHeavy { 2 * z > w.len() } else { 2 * z < w.len() });
        }
    }
}

#[test]
fn constants_golden_cubic() {
    let c = compute_constants(&cubic()).unwrap();
    assert_eq!(c.n, 8);
    assert_eq!(c.c(), BigRational::new(1.into(), 16.into()));
    assert!(c.delta.is_positive() && c.delta_prime.is_positive());
}

#[test]
fn constants_satisfy_their_double_inequalities() {
    let c = compute_constants(&BetaValue::parse("1.2").unwrap()).unwrap();
    let b = 1.2f64;
    let l = 1.0 / (b * b - 1.0);
    let r = b / (b * b - 1.0);
    let g = (b / 2.0) * (1.0 / b + l) - 1.0;
    assert_eq!(c.n2, 0);
    assert!(b.powi(c.n1 as i32 - 1) * g <= l && l < b.powi(c.n1 as i32) * g);
    let delta = r - 1.0 / b - (1.0 / (2.0 * b)) * (1.0 / b + l);
    assert!((c.delta.mid_f64() - delta).abs() < 1e-12);
    let dp = r - (b.powi(3) + b * b - b.powi(4)) / (b * b - 1.0);
    assert!((c.delta_prime.mid_f64() - dp).abs() < 1e-12);
    let n2 = c.n2 as i32;
    assert!(b.powi(2 * (n2 - 1)) * delta <= r - l && r - l < b.powi(2 * n2) * delta);
}

/// Words of the first case have T₀-runs of at most n₁ and length at most n₁ + 2n₂ − 1.
#[test]
fn word_lengths_respect_the_construction_bounds() {
    for spec in ["1.2", "1.3", "1.55", "poly:x^3-x^2-1:[1.4,1.5]"] {
        let beta = BetaValue::parse(spec).unwrap();
        let t = build_partition_table(&beta, Alphabet::ZeroOne).unwrap();
        let c = constants_from_table(&t).unwrap();
        for w in &t.zero_heavy.words {
            let m = w.maps();
            if m[1] != 0 {
                continue;
            }
            let mut run = 0;
            for &d in m {
                run = if d == 0 { run + 1 } else { 0 };
                assert!(run <= c.n1 as usize, "{spec}: {w}");
            }
            assert!(w.len() as u32 <= c.case_one_bound(), "{spec}: {w} vs {}", c.case_one_bound());
        }
    }
}

#[test]
fn subdivision_cap_is_enforced() {
    let e = build_partition_table_with_cap(&cubic(), Alphabet::ZeroOne, 3).unwrap_err();
    assert!(matches!(e, SynthesisError::SubdivisionOverflow { cap: 3 }));
}

#[test]
fn json_shape() {
    let t = build_partition_table(&cubic(), Alphabet::ZeroOne).unwrap();
    let v = t.to_json();
    assert_eq!(v["n_beta"], 8);
    assert_eq!(v["alphabet"], "01");
    assert_eq!(v["omega0_cells"][0]["omega0"], "1,0,0,0");
    assert!(v["cells"].as_array().unwrap().len() >= 7);
}
