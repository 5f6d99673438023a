mod common;

use invfactor::arith::{divisors, gcd, pow_mod, primes_up_to};
use invfactor::density::{positivity, Verdict};
use invfactor::ffcurve::{count_points, empirical_table, group_structure, li, ReducedCurve, WeierstrassCurve};
use num::ToPrimitive;
use proptest::prelude::*;

const CORPUS: [[i64; 5]; 10] = [
    [0, 1, 1, 1, 0],
    [1, 1, 1, -3, 1],
    [0, -1, 0, -641, 3105],
    [0, 0, 0, -864, -5616],
    [0, 0, 0, -3, 4],
    [0, 0, 1, -1, 0],
    [0, 0, 0, -7, 6],
    [0, 1, 0, -2, -1],
    [0, 0, 0, 1053, 24786],
    [1, -1, 1, -29, 53],
];

fn residue(c: i64, p: u64) -> u64 {
    c.rem_euclid(p as i64) as u64
}

fn legendre(v: u64, p: u64) -> i64 {
    match pow_mod(v % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `#E(F_p)` straight from the long Weierstrass equation: for each `x` the
/// equation is a quadratic in `y` with discriminant `(a1 x + a3)^2 + 4 f(x)`.
fn naive_count(a: [i64; 5], p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = a.map(|c| residue(c, p));
    let mut n: i64 = 1;
    for x in 0..p {
        let f = ((x * x % p * x) % p + a2 * x % p * x % p + a4 * x % p + a6) % p;
        let h = (a1 * x + a3) % p;
        n += 1 + legendre((h * h + 4 * f) % p, p);
    }
    n as u64
}

/// Roots mod `p` of the 2-division polynomial `4x^3 + b2 x^2 + 2 b4 x + b6`.
fn two_torsion_count(a: [i64; 5], p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let [b2, b4, b6] = [b2, b4, b6].map(|c| residue(c, p));
    1 + (0..p)
        .filter(|&x| (4 * x % p * x % p * x % p + b2 * x % p * x % p + 2 * b4 * x % p + b6).is_multiple_of(p))
        .count() as u64
}

/// `d` as the largest `k | gcd(N, p - 1)` with `#E[k] = k^2`.
fn torsion_oracle(r: &ReducedCurve, n: u64) -> u64 {
    let pts = r.points();
    divisors(gcd(n, r.p - 1))
        .into_iter()
        .filter(|&k| n.is_multiple_of(k * k))
        .filter(|&k| pts.iter().filter(|&&pt| r.mul(k, pt).is_none()).count() as u64 == k * k)
        .max()
        .unwrap()
}

/// `d = N / exponent`, the exponent being the lcm of point orders.
fn exponent_oracle(r: &ReducedCurve, n: u64) -> u64 {
    let divs = divisors(n);
    let mut exponent = 1u64;
    for pt in r.points() {
        let ord = *divs.iter().find(|&&k| r.mul(k, pt).is_none()).unwrap();
        exponent = exponent / gcd(exponent, ord) * ord;
        if exponent == n {
            break;
        }
    }
    n / exponent
}

#[test]
fn counts_match_the_long_model() {
    for a in CORPUS {
        let e = WeierstrassCurve::from_i64(a).unwrap();
        for p in primes_up_to(2000).into_iter().filter(|&p| e.good_reduction(p)) {
            assert_eq!(count_points(&e, p).unwrap(), naive_count(a, p), "{a:?} at {p}");
        }
    }
}

#[test]
fn structures_match_both_oracles() {
    for a in CORPUS {
        let e = WeierstrassCurve::from_i64(a).unwrap();
        for p in primes_up_to(700).into_iter().filter(|&p| e.good_reduction(p)) {
            let gs = group_structure(&e, p).unwrap();
            let r = ReducedCurve::new(&e, p).unwrap();
            assert_eq!(gs.n, naive_count(a, p));
            assert_eq!(gs.d, torsion_oracle(&r, gs.n), "{a:?} at {p}");
            assert_eq!(gs.d, exponent_oracle(&r, gs.n), "{a:?} at {p}");
            assert_eq!(gs.d.is_multiple_of(2), two_torsion_count(a, p) == 4, "{a:?} at {p}");
        }
    }
}

#[test]
fn table_rows_sum_to_good_primes() {
    for a in CORPUS {
        let e = WeierstrassCurve::from_i64(a).unwrap();
        let t = empirical_table(&e, 5000, 5000).unwrap();
        let good = primes_up_to(5000).into_iter().filter(|&p| e.good_reduction(p)).count() as u64;
        assert_eq!(t.good_count, good);
        assert_eq!(t.hits.values().sum::<u64>(), good);
    }
}

#[test]
fn table_respects_the_prime_bound() {
    let e = WeierstrassCurve::from_i64(CORPUS[0]).unwrap();
    assert!(empirical_table(&e, 10_001, 10_000).is_err());
}

#[test]
fn zero_densities_have_no_hits() {
    let recs = common::fixtures();
    for r in recs.iter().filter(|r| r.has_image()) {
        let h = r.image().unwrap();
        let t = empirical_table(&r.curve, 20_000, 20_000).unwrap();
        for j in 1..=24 {
            if positivity(h, j).unwrap().verdict == Verdict::Zero {
                assert_eq!(t.row(j).hits, 0, "{} at j = {j}", r.label());
            }
        }
    }
}

#[test]
fn li_reference_values() {
    assert!((li(100.0).unwrap() - 29.080977804).abs() < 1e-6);
    assert!((li(1e5).unwrap() - 9628.763837).abs() < 1e-4);
    assert!((li(3.0).unwrap() - 1.1184).abs() < 1e-3);
    assert!(li(2.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_short_models_obey_hasse(a4 in -50i64..50, a6 in -50i64..50, idx in 0usize..100) {
        let Ok(e) = WeierstrassCurve::from_i64([0, 0, 0, a4, a6]) else { return Ok(()); };
        let p = primes_up_to(600)[idx + 2];
        prop_assume!(e.good_reduction(p));
        let gs = group_structure(&e, p).unwrap();
        prop_assert_eq!(gs.n, naive_count([0, 0, 0, a4, a6], p));
        prop_assert_eq!(gs.d * gs.e, gs.n);
        prop_assert_eq!(gs.e % gs.d, 0);
        prop_assert_eq!((p - 1) % gs.d, 0);
        let bound = 2.0 * (p as f64).sqrt();
        prop_assert!(((gs.n as f64) - (p as f64 + 1.0)).abs() <= bound);
        prop_assert!(e.discriminant().to_i128().is_some());
    }
}
