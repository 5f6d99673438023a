//! Coincidences `Q(E[j]) = Q(E[jp])` of division fields: detection from
//! image data, primitive/imprimitive classification, explicit families and
//! metadata-based predictions.

pub mod families;
pub mod predict;

use serde::Serialize;

use crate::arith::{divisors, gcd, prime_divisors};
use crate::density::{positivity, Verdict};
use crate::error::Result;
use crate::glgroup::SubgroupClosure;

pub use families::{family_instantiate, CurveFamily, FamilyPoint, FamilyRegistry, PredictedImage};
pub use predict::{
    predict_coincidences, CoincidencePredictor, DivisionFieldFacts, PredictedCoincidence, PredictorInput,
    PredictorRegistry,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coincidence {
    pub j: u64,
    pub p: u64,
    pub primitive: bool,
    /// For imprimitive ones, the least `d | j` with `gcd(j/d, p) = 1` that is
    /// already a coincidence.
    pub induced_from: Option<u64>,
    pub source: String,
}

/// `|H mod j| = |H mod jp|`. Primes not dividing the modulus never qualify.
pub fn is_p_coincidence(h: &SubgroupClosure, j: u64, p: u64) -> Result<bool> {
    if j == 0 || !(h.modulus() as u64).is_multiple_of(p) {
        return Ok(false);
    }
    Ok(h.order_mod_extended(j)? == h.order_mod_extended(j * p)?)
}

fn classify(h: &SubgroupClosure, j: u64, p: u64, source: &str) -> Result<Coincidence> {
    let mut induced_from = None;
    for d in divisors(j) {
        if d < j && gcd(j / d, p) == 1 && is_p_coincidence(h, d, p)? {
            induced_from = Some(d);
            break;
        }
    }
    Ok(Coincidence {
        j,
        p,
        primitive: induced_from.is_none(),
        induced_from,
        source: source.to_string(),
    })
}

/// Every coincidence `(j, p)` with `j <= j_bound`.
pub fn all_coincidences(h: &SubgroupClosure, j_bound: u64, source: &str) -> Result<Vec<Coincidence>> {
    let primes = prime_divisors(h.modulus() as u64);
    let mut out = Vec::new();
    for j in 1..=j_bound {
        for &p in &primes {
            if is_p_coincidence(h, j, p)? {
                out.push(classify(h, j, p, source)?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub label: String,
    pub zeros: Vec<u64>,
    pub coincidences: Vec<Coincidence>,
    /// Zeros with no coincidence at the same `j`.
    pub unexplained_zeros: Vec<u64>,
    /// Coincidences with `p >= 5`.
    pub large_prime_coincidences: Vec<Coincidence>,
}

impl ScanEntry {
    pub fn has_counterexample(&self) -> bool {
        !self.unexplained_zeros.is_empty() || !self.large_prime_coincidences.is_empty()
    }
}

/// Zeros of `C_{E,j}` for `j <= j_bound` and for every divisor of the
/// modulus, each checked for an explaining coincidence.
pub fn scan_image(label: &str, h: &SubgroupClosure, j_bound: u64) -> Result<ScanEntry> {
    let m = h.modulus() as u64;
    let mut js: Vec<u64> = (1..=j_bound).chain(divisors(m)).collect();
    js.sort_unstable();
    js.dedup();
    let mut zeros = Vec::new();
    let mut unexplained = Vec::new();
    let mut verdict_cache = std::collections::BTreeMap::new();
    for &j in &js {
        let jr = gcd(j, m);
        let verdict = match verdict_cache.get(&jr) {
            Some(&v) => v,
            None => {
                let v = positivity(h, jr)?.verdict;
                verdict_cache.insert(jr, v);
                v
            }
        };
        if verdict == Verdict::Zero {
            zeros.push(j);
            let mut explained = false;
            for p in prime_divisors(m) {
                if is_p_coincidence(h, j, p)? {
                    explained = true;
                    break;
                }
            }
            if !explained {
                unexplained.push(j);
            }
        }
    }
    let coincidences = all_coincidences(h, j_bound.max(m), label)?;
    let large = coincidences.iter().filter(|c| c.p >= 5).cloned().collect();
    Ok(ScanEntry {
        label: label.to_string(),
        zeros,
        coincidences,
        unexplained_zeros: unexplained,
        large_prime_coincidences: large,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glgroup::{close, ModMatrix, DEFAULT_BUDGET};

    fn x60d() -> SubgroupClosure {
        close(4, &[ModMatrix::new(4, [1, 1, 0, 3]).unwrap()], DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn detection() {
        let h = x60d();
        assert!(is_p_coincidence(&h, 2, 2).unwrap());
        assert!(!is_p_coincidence(&h, 1, 2).unwrap());
        assert!(!is_p_coincidence(&h, 2, 3).unwrap());
        let trivial = close(2, &[], DEFAULT_BUDGET).unwrap();
        assert!(is_p_coincidence(&trivial, 1, 2).unwrap());
    }

    #[test]
    fn classification() {
        let cs = all_coincidences(&x60d(), 12, "x60d").unwrap();
        let pairs: Vec<_> = cs.iter().map(|c| (c.j, c.p, c.primitive)).collect();
        assert_eq!(pairs, vec![(2, 2, true), (6, 2, false), (10, 2, false)]);
        assert_eq!(cs[1].induced_from, Some(2));
        let full = SubgroupClosure::full(6, DEFAULT_BUDGET).unwrap();
        assert!(all_coincidences(&full, 30, "gl").unwrap().is_empty());
    }

    #[test]
    fn scans() {
        let e = scan_image("x60d", &x60d(), 12).unwrap();
        assert!(!e.has_counterexample());
        assert!(e.zeros.contains(&2) && e.zeros.contains(&6));
        let trivial = close(2, &[], DEFAULT_BUDGET).unwrap();
        let t = scan_image("full2", &trivial, 9).unwrap();
        assert_eq!(t.zeros, vec![1, 3, 5, 7, 9]);
        assert!(t.unexplained_zeros.is_empty());
    }
}
