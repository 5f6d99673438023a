mod common;

use invfactor::arith::{gcd, prime_divisors};
use invfactor::coincidence::families::short_discriminant;
use invfactor::coincidence::{
    all_coincidences, family_instantiate, is_p_coincidence, predict_coincidences, DivisionFieldFacts, FamilyRegistry,
    PredictorRegistry,
};
use invfactor::density::{positivity, Verdict};
use invfactor::glgroup::{SubgroupClosure, DEFAULT_BUDGET};
use invfactor::harness::{cmd_coincidences, RunConfig};
use num::{BigInt, BigRational, One, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn hesse_expected(t: &BigRational) -> BigRational {
    let t3 = t * t * t - BigRational::one();
    q(4096 * 19683, 1) * &t3 * &t3 * &t3
}

fn predicted_closure(family: &str, twist: Option<i64>) -> SubgroupClosure {
    let p = family_instantiate(family, &q(1, 1), twist).unwrap();
    let img = p.predicted_image.unwrap();
    let gens: Vec<_> = img
        .generators
        .iter()
        .map(|g| g.to_matrix(img.modulus).unwrap())
        .collect();
    SubgroupClosure::close(img.modulus, &gens, DEFAULT_BUDGET).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hesse_discriminant_identity(n in -60i64..60, d in 1i64..40) {
        let t = q(n, d);
        prop_assume!(t != BigRational::one());
        let registry = FamilyRegistry::builtin();
        let hesse = registry.get("Hesse").unwrap();
        let (a4, a6) = hesse.short_model(&t);
        prop_assert_eq!(short_discriminant(&a4, &a6), hesse_expected(&t));
        let point = family_instantiate("Hesse", &t, None).unwrap();
        let u: BigInt = point.scaling.parse().unwrap();
        let scaled = BigRational::from_integer(num::pow(u, 12)) * hesse_expected(&t);
        prop_assert_eq!(BigRational::from_integer(point.curve.discriminant().clone()), scaled);
    }

    #[test]
    fn x60d_two_division_field_is_quadratic(n in -30i64..30, d in 1i64..20) {
        let t = q(n, d);
        let Ok(p) = family_instantiate("X60d", &t, None) else { return Ok(()); };
        prop_assert_eq!(p.curve.two_division_degree(), 2);
        let a4: BigInt = p.coefficients[3].parse().unwrap();
        let a6: BigInt = p.coefficients[4].parse().unwrap();
        let disc = short_discriminant(&BigRational::from_integer(a4), &BigRational::from_integer(a6));
        prop_assert!(!disc.is_zero());
    }

    #[test]
    fn coincidences_force_zero(seed in any::<u64>()) {
        let c = common::random_case(seed);
        let m = c.m as u64;
        for p in prime_divisors(m) {
            for j in 1..=2 * m {
                if is_p_coincidence(&c.h, j, p).unwrap() {
                    prop_assert_eq!(positivity(&c.h, j).unwrap().verdict, Verdict::Zero);
                }
            }
        }
    }

    #[test]
    fn induced_coincidences_are_closed_under_coprime_multiples(seed in any::<u64>()) {
        let c = common::random_case(seed);
        let bound = 2 * c.m as u64;
        let found = all_coincidences(&c.h, bound, "test").unwrap();
        let has = |j: u64, p: u64| found.iter().any(|x| x.j == j && x.p == p);
        for x in &found {
            match x.induced_from {
                None => prop_assert!(x.primitive),
                Some(d) => {
                    prop_assert!(has(d, x.p));
                    prop_assert_eq!(x.j % d, 0);
                    prop_assert_eq!(gcd(x.j / d, x.p), 1);
                }
            }
            for k in 2..=bound / x.j {
                if gcd(k, x.p) == 1 {
                    prop_assert!(has(x.j * k, x.p), "({}, {}) times {}", x.j, x.p, k);
                }
            }
        }
    }
}

#[test]
fn family_images_carry_their_predicted_coincidences() {
    let x60d = predicted_closure("X60d", None);
    assert_eq!(x60d.order(), 2);
    assert!(is_p_coincidence(&x60d, 2, 2).unwrap());
    assert!(!is_p_coincidence(&x60d, 1, 2).unwrap());
    let facts = DivisionFieldFacts {
        two_division_is_q_i: Some(true),
        four_division_abelian_conductor: Some(4),
        ..Default::default()
    };
    let predicted = predict_coincidences(&facts, None);
    assert!(predicted.iter().any(|c| (c.j, c.p) == (2, 2)));

    let twist = predicted_closure("X60_twist", Some(-3));
    assert_eq!(twist.order(), 4);
    assert!(!is_p_coincidence(&twist, 2, 2).unwrap());

    let x27h = predicted_closure("X27h", None);
    assert_eq!((x27h.order_mod(2).unwrap(), x27h.order()), (2, 4));
    assert!(!is_p_coincidence(&x27h, 2, 2).unwrap());
}

#[test]
fn fixture_predictions_agree_with_images() {
    let recs = common::fixtures();
    let report = cmd_coincidences(&recs, 60, &RunConfig::default()).unwrap();
    assert_eq!(report.mismatch_count(), 0);
    let x60d = report.entries.iter().find(|e| e.label == "X60d-t1").unwrap();
    assert!(x60d.predicted.iter().any(|p| (p.j, p.p) == (2, 2)));
    let cubic = report.entries.iter().find(|e| e.label == "cubic-7").unwrap();
    assert!(cubic.predicted.iter().any(|p| (p.j, p.p) == (7, 2)));
    let detected = cubic.detected.as_ref().unwrap();
    assert!(detected.iter().any(|c| (c.j, c.p, c.primitive) == (7, 2, true)));
    assert!(detected.iter().any(|c| (c.j, c.p, c.primitive) == (9, 2, true)));
}

#[test]
fn predictor_registry_selects_by_name() {
    let r = PredictorRegistry::builtin();
    assert_eq!(
        r.names(),
        [
            "ab-eight-torsion",
            "ab-four-torsion",
            "ab-two-torsion",
            "min-three-torsion"
        ]
    );
    assert_eq!(r.select(&["min-three-torsion".to_string()]).unwrap().len(), 1);
    assert!(r.select(&["nope".to_string()]).is_err());
    assert_eq!(r.select(&[]).unwrap().len(), 4);
}

#[test]
fn three_torsion_predictions_follow_the_discriminant() {
    let facts = DivisionFieldFacts {
        three_division_is_q_zeta3: Some(true),
        ..Default::default()
    };
    let at = |d| {
        predict_coincidences(&facts, Some(d))
            .iter()
            .map(|c| (c.j, c.p))
            .collect::<Vec<_>>()
    };
    assert_eq!(at(21), [(14, 3)]);
    assert_eq!(at(-21), [(28, 3)]);
    assert_eq!(at(-3), [(2, 3)]);
}
