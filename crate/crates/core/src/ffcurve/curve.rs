use num::bigint::BigInt;
use num::{Signed, ToPrimitive, Zero};

use crate::arith::squarefree_part;
use crate::error::{Error, Result};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a: [BigInt; 5],
    disc: BigInt,
}

impl WeierstrassCurve {
    pub fn new(a: [BigInt; 5]) -> Result<Self> {
        let disc = discriminant_of(&a);
        if disc.is_zero() {
            return Err(Error::SingularModel);
        }
        Ok(Self { a, disc })
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(BigInt::from))
    }

    /// `y^2 = x^3 + a4 x + a6`.
    pub fn short(a4: BigInt, a6: BigInt) -> Result<Self> {
        Self::new([BigInt::zero(), BigInt::zero(), BigInt::zero(), a4, a6])
    }

    pub fn coefficients(&self) -> &[BigInt; 5] {
        &self.a
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn c4(&self) -> BigInt {
        let (b2, b4, _, _) = b_invariants(&self.a);
        &b2 * &b2 - 24 * b4
    }

    pub fn c6(&self) -> BigInt {
        let (b2, b4, b6, _) = b_invariants(&self.a);
        -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * b6
    }

    /// `(A, B)` with `y^2 = x^3 + A x + B` isomorphic to the curve over any
    /// field of characteristic other than 2 and 3: `A = -27 c4`, `B = -54 c6`.
    pub fn short_coefficients(&self) -> (BigInt, BigInt) {
        (-27 * self.c4(), -54 * self.c6())
    }

    pub fn discriminant_squarefree_part(&self) -> Result<i128> {
        let d = self
            .disc
            .to_i128()
            .ok_or_else(|| Error::InvalidInput("discriminant exceeds 128 bits".into()))?;
        squarefree_part(d)
    }

    /// `p > 3` and `p ∤ Δ` for this model.
    pub fn good_reduction(&self, p: u64) -> bool {
        p > 3 && !(&self.disc % BigInt::from(p)).is_zero()
    }

    /// Degree of `Q(E[2])` over `Q`: 1, 2, 3 or 6.
    pub fn two_division_degree(&self) -> u32 {
        let (a, b) = self.short_coefficients();
        let roots = integer_roots_of_depressed_cubic(&a, &b);
        match roots.len() {
            3 => 1,
            1 => 2,
            _ => {
                let disc = -4 * &a * &a * &a - 27 * &b * &b;
                if is_square(&disc) {
                    3
                } else {
                    6
                }
            }
        }
    }
}

fn b_invariants(a: &[BigInt; 5]) -> (BigInt, BigInt, BigInt, BigInt) {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    (b2, b4, b6, b8)
}

fn discriminant_of(a: &[BigInt; 5]) -> BigInt {
    let (b2, b4, b6, b8) = b_invariants(a);
    -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Distinct integer roots of `x^3 + a x + b`, which are all its rational
/// roots.
fn integer_roots_of_depressed_cubic(a: &BigInt, b: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| x * x * x + a * x + b;
    let af = a.to_f64().unwrap_or(f64::MAX);
    let bf = b.to_f64().unwrap_or(f64::MAX);
    let mut candidates: Vec<f64> = Vec::new();
    // Real roots in double precision, then an exact check on nearby integers.
    let disc = -4.0 * af * af * af - 27.0 * bf * bf;
    if disc > 0.0 {
        let r = (-af / 3.0).sqrt();
        let arg = ((3.0 * bf) / (2.0 * af) * (-3.0 / af).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        for k in 0..3 {
            candidates.push(2.0 * r * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos());
        }
    } else {
        let s = (bf * bf / 4.0 + af * af * af / 27.0).max(0.0).sqrt();
        candidates.push((-bf / 2.0 + s).cbrt() + (-bf / 2.0 - s).cbrt());
        if af == 0.0 {
            candidates.push((-bf).cbrt());
        }
    }
    let mut roots: Vec<BigInt> = Vec::new();
    for c in candidates {
        if !c.is_finite() {
            continue;
        }
        let base = BigInt::from(c.round() as i128);
        for delta in -2i32..=2 {
            let x = &base + delta;
            if f(&x).is_zero() && !roots.contains(&x) {
                roots.push(x);
            }
        }
    }
    if roots.len() == 1 {
        // Remaining quadratic x^2 + r x + (r^2 + a) may still split.
        let r = &roots[0];
        let disc = r * r - 4 * (r * r + a);
        if is_square(&disc) {
            let s = disc.sqrt();
            for x in [(-r + &s) / 2, (-r - &s) / 2] {
                if f(&x).is_zero() && !roots.contains(&x) {
                    roots.push(x);
                }
            }
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        let e = WeierstrassCurve::from_i64([0, 0, 0, -7, 6]).unwrap();
        assert_eq!(e.discriminant(), &BigInt::from(6400));
        let e19 = WeierstrassCurve::from_i64([0, 1, 1, 1, 0]).unwrap();
        assert_eq!(e19.discriminant(), &BigInt::from(-19));
        let e50 = WeierstrassCurve::from_i64([1, 1, 1, -3, 1]).unwrap();
        assert_eq!(e50.discriminant(), &BigInt::from(-800));
        assert_eq!(WeierstrassCurve::from_i64([0, 0, 0, 0, 0]), Err(Error::SingularModel));
    }

    #[test]
    fn good_reduction_policy() {
        let e = WeierstrassCurve::from_i64([0, 0, 0, -7, 6]).unwrap();
        assert!(!e.good_reduction(5));
        assert!(e.good_reduction(7));
        assert!(!e.good_reduction(2));
        assert!(!e.good_reduction(3));
    }

    #[test]
    fn two_division_degrees() {
        assert_eq!(
            WeierstrassCurve::from_i64([0, 0, 0, -7, 6])
                .unwrap()
                .two_division_degree(),
            1
        );
        assert_eq!(
            WeierstrassCurve::from_i64([0, 0, 0, 1, 0])
                .unwrap()
                .two_division_degree(),
            2
        );
        assert_eq!(
            WeierstrassCurve::from_i64([0, 0, 0, -1, 1])
                .unwrap()
                .two_division_degree(),
            6
        );
        // x^3 - 3x + 1 has cyclic Galois group.
        assert_eq!(
            WeierstrassCurve::from_i64([0, 0, 0, -3, 1])
                .unwrap()
                .two_division_degree(),
            3
        );
    }
}
