#![allow(dead_code)]

use std::path::PathBuf;

use invfactor::arith::{gcd, is_prime};
use invfactor::glgroup::{ModMatrix, SubgroupClosure, DEFAULT_BUDGET};
use invfactor::harness::{parse_records, LoadedRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/curves.json")
}

pub fn fixtures() -> Vec<LoadedRecord> {
    parse_records(&fixture_path(), DEFAULT_BUDGET).expect("bundled fixtures parse")
}

pub fn fixture<'a>(recs: &'a [LoadedRecord], label: &str) -> &'a LoadedRecord {
    recs.iter().find(|r| r.label() == label).expect("fixture label")
}

/// A subgroup mod `m` and a prime `p` with `m * p <= 60`.
pub struct RandomCase {
    pub m: u32,
    pub p: u64,
    pub h: SubgroupClosure,
}

fn random_unit_matrix(rng: &mut ChaCha8Rng, m: u32) -> ModMatrix {
    loop {
        let e: [i64; 4] = std::array::from_fn(|_| rng.gen_range(0..m as i64));
        let g = ModMatrix::new(m, e).unwrap();
        if g.is_invertible() {
            return g;
        }
    }
}

/// Deterministic random subgroup from a seed: one to three random
/// generators, plus diagonal unit generators half of the time.
pub fn random_case(seed: u64) -> RandomCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u32, u64)> = (2u32..=30)
        .flat_map(|m| (2u64..=60 / m as u64).filter(|&p| is_prime(p)).map(move |p| (m, p)))
        .collect();
    let (m, p) = pairs[rng.gen_range(0..pairs.len())];
    let mut gens: Vec<ModMatrix> = (0..rng.gen_range(1..=3))
        .map(|_| random_unit_matrix(&mut rng, m))
        .collect();
    if rng.gen_bool(0.5) {
        for u in 1..m {
            if gcd(u as u64, m as u64) == 1 {
                gens.push(ModMatrix::new(m, [u as i64, 0, 0, 1]).unwrap());
            }
        }
    }
    let h = SubgroupClosure::close(m, &gens, DEFAULT_BUDGET).unwrap();
    RandomCase { m, p, h }
}
