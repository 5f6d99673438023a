//! The density `C_{E,j}` of primes whose reduction has first invariant factor
//! `j`, its exact positivity decision, and the sufficient criteria for
//! positivity.
//!
//! For `j | m` the density factors as a finite Möbius sum over squarefree `k`
//! supported on `S = {p : v_p(j) < v_p(m)}` times an Euler product. The sign
//! is decided exactly by comparing `H ∩ Γ_j` with the union of the
//! `H ∩ Γ_{jp}`, `p in S`.

pub mod criteria;
pub mod delta;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, gcd, mobius, psi, squarefree_subsets};
use crate::error::{Error, Result};
use crate::glgroup::{ModMatrix, SubgroupClosure};
use crate::interval::{RationalInterval, GUARD_BITS};

pub use criteria::{
    criterion_abelianisation, criterion_coprime, criterion_t4b, serre_positivity, CriterionContext, CriterionOutcome,
    CriterionRegistry, CriterionStatus, PositivityCriterion, T4bDiagnostics,
};
pub use delta::{delta_f_prime, DeltaFprime, DeltaFprimeInput};

/// Default Euler-product truncation.
pub const DEFAULT_TRUNCATION: u64 = 10_000;

/// Primes `p` with `v_p(j) < v_p(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSetS {
    pub j: u64,
    pub m: u64,
    pub primes: Vec<u64>,
}

pub fn prime_set(j: u64, m: u64) -> PrimeSetS {
    let primes = arith::prime_divisors(m)
        .into_iter()
        .filter(|&p| arith::valuation(j, p) < arith::valuation(m, p))
        .collect();
    PrimeSetS { j, m, primes }
}

/// `gcd(j, m)`: positivity at `j` is decided at this divisor of `m`.
pub fn reduce_j(j: u64, m: u64) -> u64 {
    gcd(j, m)
}

/// `Σ_{k | ∏S} μ(k) / |H mod jk|`.
pub fn finite_part(h: &SubgroupClosure, j: u64) -> Result<BigRational> {
    if j == 0 {
        return Err(Error::NonPositive("j"));
    }
    let s = prime_set(j, h.modulus() as u64);
    let mut acc = BigRational::zero();
    for (k, mu) in squarefree_subsets(&s.primes) {
        let order = h.order_mod_extended(j * k)?;
        acc += BigRational::new(BigInt::from(mu), BigInt::from(order));
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Zero,
    Positive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Zero => "ZERO",
            Verdict::Positive => "POSITIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCoverage {
    pub p: u64,
    /// `|H ∩ Γ_{jp} mod m|`.
    pub covered: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// An element of `H ∩ Γ_j` outside every `Γ_{jp}`.
    Witness { element: ModMatrix },
    /// `H ∩ Γ_j` is the union of the `H ∩ Γ_{jp}`.
    Covering {
        kernel_order: u64,
        coverage: Vec<PrimeCoverage>,
        /// A prime with `H ∩ Γ_j = H ∩ Γ_{jp}`, i.e. a `p`-coincidence at `j`.
        coincidence_prime: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Positivity {
    pub j: u64,
    /// `gcd(j, m)`, where the decision is actually made.
    pub j_reduced: u64,
    pub modulus: u64,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

/// Exact decision of `C_{E,j} > 0`, routed through `gcd(j, m)`.
pub fn positivity(h: &SubgroupClosure, j: u64) -> Result<Positivity> {
    if j == 0 {
        return Err(Error::NonPositive("j"));
    }
    let m = h.modulus() as u64;
    let jr = reduce_j(j, m);
    let s = prime_set(jr, m).primes;
    let done = |verdict, certificate| Positivity {
        j,
        j_reduced: jr,
        modulus: m,
        verdict,
        certificate,
    };
    if s.is_empty() {
        return Ok(done(
            Verdict::Positive,
            Certificate::Witness {
                element: ModMatrix::identity(h.modulus()),
            },
        ));
    }
    let jr32 = jr as u32;
    let targets: Vec<u32> = s.iter().map(|&p| (jr * p) as u32).collect();
    let mut counts = vec![0u64; s.len()];
    let mut kernel_order = 0u64;
    for g in h.elements() {
        if !g.is_identity_mod(jr32) {
            continue;
        }
        kernel_order += 1;
        let mut hit = false;
        for (i, &t) in targets.iter().enumerate() {
            if g.is_identity_mod(t) {
                counts[i] += 1;
                hit = true;
            }
        }
        if !hit {
            return Ok(done(Verdict::Positive, Certificate::Witness { element: g }));
        }
    }
    let coverage: Vec<PrimeCoverage> = s
        .iter()
        .zip(&counts)
        .map(|(&p, &covered)| PrimeCoverage { p, covered })
        .collect();
    let coincidence_prime = coverage.iter().find(|c| c.covered == kernel_order).map(|c| c.p);
    Ok(done(
        Verdict::Zero,
        Certificate::Covering {
            kernel_order,
            coverage,
            coincidence_prime,
        },
    ))
}

/// `1 - |⋃_p H∩Γ_{jp}| / |H∩Γ_j|`, all over the modulus; `j | m`.
pub fn union_complement_fraction(h: &SubgroupClosure, j: u64) -> Result<BigRational> {
    let m = h.modulus() as u64;
    if !m.is_multiple_of(j) {
        return Err(Error::NotADivisor { divisor: j, modulus: m });
    }
    let s = prime_set(j, m).primes;
    let mut kernel = 0i64;
    let mut union = 0i64;
    for g in h.elements() {
        if g.is_identity_mod(j as u32) {
            kernel += 1;
            if s.iter().any(|&p| g.is_identity_mod((j * p) as u32)) {
                union += 1;
            }
        }
    }
    Ok(BigRational::one() - BigRational::new(union.into(), kernel.into()))
}

/// Enclosure of `∏_{p∉S, p|j}(1 - p^-4) · ∏_{p∉S, p∤j}(1 - 1/ψ(p))`, exact
/// for primes up to `trunc` and with the tail bounded below by
/// `1 - 2/(3(P-1)^3)`.
pub fn euler_interval(j: u64, s: &[u64], trunc: u64) -> Result<RationalInterval> {
    if trunc < 3 {
        return Err(Error::InvalidInput("truncation must be at least 3".into()));
    }
    let mut exact = BigRational::one();
    for p in arith::prime_divisors(j) {
        if !s.contains(&p) {
            let p4 = BigInt::from(p).pow(4);
            exact *= BigRational::new(&p4 - 1, p4);
        }
    }
    let mut acc = RationalInterval::one();
    for p in arith::primes_up_to(trunc) {
        if s.contains(&p) || j.is_multiple_of(p) {
            continue;
        }
        let ps = psi(p)?;
        let factor = BigRational::new(BigInt::from(ps - 1), BigInt::from(ps));
        acc = acc.scale(&factor).round_outward(GUARD_BITS);
    }
    let t = BigInt::from(trunc - 1);
    let tail_lo = BigRational::one() - BigRational::new(BigInt::from(2), BigInt::from(3) * t.pow(3));
    let tail = RationalInterval::new(tail_lo, BigRational::one());
    Ok(acc.mul(&tail).scale(&exact))
}

#[derive(Debug, Clone)]
pub struct DensityResult {
    pub j: u64,
    pub modulus: u64,
    pub prime_set: PrimeSetS,
    pub finite_part: BigRational,
    pub euler_interval: RationalInterval,
    pub value_interval: RationalInterval,
    pub verdict: Verdict,
    pub positivity: Positivity,
    pub truncation: u64,
}

/// `C_{E,j}` to truncation `trunc`.
pub fn cej(h: &SubgroupClosure, j: u64, trunc: u64) -> Result<DensityResult> {
    let m = h.modulus() as u64;
    let s = prime_set(j, m);
    let fp = finite_part(h, j)?;
    let euler = euler_interval(j, &s.primes, trunc)?;
    let pos = positivity(h, j)?;
    let sign_positive = fp.is_positive();
    if sign_positive != (pos.verdict == Verdict::Positive) || fp.is_negative() {
        return Err(Error::Internal(format!(
            "finite part {fp} disagrees with verdict {} at j = {j}",
            pos.verdict
        )));
    }
    let value = match pos.verdict {
        Verdict::Zero => RationalInterval::zero(),
        Verdict::Positive => euler.scale(&fp),
    };
    Ok(DensityResult {
        j,
        modulus: m,
        prime_set: s,
        finite_part: fp,
        euler_interval: euler,
        value_interval: value,
        verdict: pos.verdict,
        positivity: pos,
        truncation: trunc,
    })
}

/// What is known about one `|H mod n|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderBound {
    Exact(u128),
    AtLeast(u128),
    AtMost(u128),
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedTerm {
    pub k: u64,
    pub bound: OrderBound,
}

/// A lower bound for `Σ_k μ(k)/|H mod jk|` from partial order information:
/// positive terms need an upper bound on the order, negative terms a lower
/// bound; anything else is replaced by its worst case.
pub fn finite_part_lower_bound(terms: &[BoundedTerm]) -> BigRational {
    let mut acc = BigRational::zero();
    for t in terms {
        let mu = mobius(t.k);
        let r = |n: u128| BigRational::new(BigInt::one(), BigInt::from(n));
        match (mu, t.bound) {
            (0, _) => {}
            (1, OrderBound::Exact(n) | OrderBound::AtMost(n)) => acc += r(n),
            (1, _) => {}
            (_, OrderBound::Exact(n) | OrderBound::AtLeast(n)) => acc -= r(n),
            (_, _) => acc -= BigRational::one(),
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct SeriesCheck {
    pub terms: u64,
    pub partial: RationalInterval,
    pub remainder: BigRational,
}

impl SeriesCheck {
    /// Whether the partial sum, widened by the remainder, is compatible with
    /// `value`.
    pub fn consistent_with(&self, value: &RationalInterval) -> bool {
        value.widen(&self.remainder).contains_interval(&self.partial)
    }
}

/// `Σ_{k ≤ K} μ(k)/|H mod jk|` with a rigorous bound on the omitted terms.
///
/// The remainder uses `|H mod jk| ≥ ψ(k)/[GL_2 : H]`,
/// `ψ(k) ≥ 0.6 k^3 φ(k)` and `φ(k) ≥ sqrt(k/2)`.
pub fn truncated_series(h: &SubgroupClosure, j: u64, terms: u64) -> Result<SeriesCheck> {
    if terms == 0 {
        return Err(Error::NonPositive("terms"));
    }
    let mut partial = RationalInterval::zero();
    for k in 1..=terms {
        let mu = mobius(k);
        if mu == 0 {
            continue;
        }
        let order = h.order_mod_extended(j * k)?;
        let term = RationalInterval::point(BigRational::new(mu.into(), BigInt::from(order)));
        partial = partial.add(&term).round_outward(GUARD_BITS);
    }
    let m = h.modulus() as u64;
    let index = psi(m)? / h.order() as u128;
    let root = arith::isqrt_u128(terms as u128);
    let remainder = BigRational::new(
        BigInt::from(index) * 1415,
        BigInt::from(1500u32) * BigInt::from(terms).pow(2) * BigInt::from(root),
    );
    Ok(SeriesCheck {
        terms,
        partial,
        remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glgroup::{close, DEFAULT_BUDGET};

    fn m(n: u32, e: [i64; 4]) -> ModMatrix {
        ModMatrix::new(n, e).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn x60d() -> SubgroupClosure {
        close(4, &[m(4, [1, 1, 0, 3])], DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn prime_sets() {
        assert!(prime_set(12, 12).primes.is_empty());
        assert_eq!(prime_set(1, 2).primes, vec![2]);
        assert_eq!(prime_set(3, 30).primes, vec![2, 5]);
        assert_eq!(reduce_j(7, 4), 1);
        assert_eq!(reduce_j(12, 8), 4);
    }

    #[test]
    fn finite_parts() {
        let gl2 = SubgroupClosure::full(2, DEFAULT_BUDGET).unwrap();
        assert_eq!(finite_part(&gl2, 1).unwrap(), q(5, 6));
        assert_eq!(finite_part(&gl2, 2).unwrap(), q(1, 6));
        assert_eq!(finite_part(&x60d(), 2).unwrap(), q(0, 1));
        assert_eq!(finite_part(&x60d(), 4).unwrap(), q(1, 2));
    }

    #[test]
    fn positivity_examples() {
        let h = x60d();
        let p1 = positivity(&h, 1).unwrap();
        assert_eq!(p1.verdict, Verdict::Positive);
        assert_eq!(
            p1.certificate,
            Certificate::Witness {
                element: m(4, [1, 1, 0, 3])
            }
        );
        let p2 = positivity(&h, 2).unwrap();
        assert_eq!(p2.verdict, Verdict::Zero);
        match p2.certificate {
            Certificate::Covering { coincidence_prime, .. } => assert_eq!(coincidence_prime, Some(2)),
            _ => panic!("expected covering"),
        }
        let p4 = positivity(&h, 4).unwrap();
        assert_eq!(
            p4.certificate,
            Certificate::Witness {
                element: ModMatrix::identity(4)
            }
        );
        assert_eq!(positivity(&h, 6).unwrap().j_reduced, 2);
    }

    #[test]
    fn full_mod_two_value() {
        let gl2 = SubgroupClosure::full(2, DEFAULT_BUDGET).unwrap();
        let r = cej(&gl2, 1, 1000).unwrap();
        assert!(r.value_interval.width() <= q(1, 1_000_000_000));
        assert!(r.value_interval.hi() <= &q(5, 6));
        let (lo, _) = r.value_interval.to_f64_bounds();
        assert!(lo > 0.81 && lo < 0.82, "{lo}");
        let z = cej(&x60d(), 2, 1000).unwrap();
        assert_eq!(z.value_interval, RationalInterval::zero());
    }

    #[test]
    fn bounded_partial_sum() {
        let terms = [
            BoundedTerm {
                k: 1,
                bound: OrderBound::Exact(12),
            },
            BoundedTerm {
                k: 2,
                bound: OrderBound::AtLeast(72),
            },
            BoundedTerm {
                k: 5,
                bound: OrderBound::AtLeast(120),
            },
            BoundedTerm {
                k: 10,
                bound: OrderBound::Unknown,
            },
        ];
        assert_eq!(finite_part_lower_bound(&terms), q(11, 180));
    }

    #[test]
    fn series_agrees_with_factorisation() {
        let h = x60d();
        for j in [1u64, 2, 3, 4] {
            let r = cej(&h, j, 1000).unwrap();
            let s = truncated_series(&h, j, 1000).unwrap();
            assert!(s.consistent_with(&r.value_interval), "j = {j}");
        }
    }
}
