use invfactor::arith::divisors;
use invfactor::density::{delta_f_prime, DeltaFprimeInput};
use num::{BigRational, Zero};
use proptest::prelude::*;
use proptest::sample::subsequence;

const ODD_PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

fn inputs() -> impl Strategy<Value = DeltaFprimeInput> {
    (
        prop_oneof![Just(2u32), Just(3u32)],
        subsequence(ODD_PRIMES.to_vec(), 1..=4),
        any::<prop::sample::Index>(),
    )
        .prop_map(|(d, primes, idx)| {
            let r: u64 = primes.iter().product();
            let ss: Vec<u64> = divisors(r).into_iter().filter(|&s| s >= 3).collect();
            let s = ss[idx.index(ss.len())];
            DeltaFprimeInput {
                d,
                r,
                s,
                level: 2 * r,
                tail_primes_bound: 50,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mobius_and_closed_forms_agree(inp in inputs()) {
        let mob = inp.mobius_form().unwrap();
        prop_assert_eq!(&mob, &inp.closed_form().unwrap());
        prop_assert!(mob > BigRational::zero());
    }

    #[test]
    fn value_is_a_positive_enclosure(inp in inputs()) {
        let v = delta_f_prime(&inp).unwrap();
        prop_assert!(v.value.lo() > &BigRational::zero());
        prop_assert!(v.value.hi() <= &v.closed_form);
    }
}

#[test]
fn rejects_bad_parameters() {
    let ok = DeltaFprimeInput {
        d: 2,
        r: 15,
        s: 15,
        level: 30,
        tail_primes_bound: 50,
    };
    assert!(DeltaFprimeInput { d: 4, ..ok }.validate().is_err());
    assert!(DeltaFprimeInput { r: 45, ..ok }.validate().is_err());
    assert!(DeltaFprimeInput { s: 7, ..ok }.validate().is_err());
    assert!(DeltaFprimeInput { r: 30, ..ok }.validate().is_err());
}
