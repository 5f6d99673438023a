//! Closed intervals with exact rational endpoints.
//!
//! Long products are kept tractable by rounding endpoints outward to a fixed
//! dyadic grid, so every enclosure stays rigorous.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Grid `2^-GUARD_BITS` used by [`RationalInterval::round_outward`].
pub const GUARD_BITS: u32 = 192;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::point(BigRational::one())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn mul(&self, other: &RationalInterval) -> RationalInterval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RationalInterval { lo, hi }
    }

    pub fn scale(&self, q: &BigRational) -> RationalInterval {
        self.mul(&RationalInterval::point(q.clone()))
    }

    pub fn add(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Widen by `r >= 0` on both sides.
    pub fn widen(&self, r: &BigRational) -> RationalInterval {
        RationalInterval {
            lo: &self.lo - r,
            hi: &self.hi + r,
        }
    }

    /// Snap the endpoints outward to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> RationalInterval {
        let scale = BigInt::one() << bits;
        let den = BigRational::from_integer(scale.clone());
        let lo = (&self.lo * &den).floor() / &den;
        let hi = (&self.hi * &den).ceil() / &den;
        RationalInterval { lo, hi }
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (rational_to_f64(&self.lo), rational_to_f64(&self.hi))
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.lo.is_negative()
    }
}

/// Wire form of an interval: exact endpoints plus `f64` approximations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSummary {
    pub lo: String,
    pub hi: String,
    pub lo_f64: f64,
    pub hi_f64: f64,
}

impl From<&RationalInterval> for IntervalSummary {
    fn from(i: &RationalInterval) -> Self {
        let (lo_f64, hi_f64) = i.to_f64_bounds();
        Self {
            lo: rational_string(&i.lo),
            hi: rational_string(&i.hi),
            lo_f64,
            hi_f64,
        }
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn ratio(n: i64, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_f64_bounds();
        write!(f, "[{lo:.15e}, {hi:.15e}]")
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn products_and_containment() {
        let a = RationalInterval::new(q(1, 2), q(3, 4));
        let b = RationalInterval::new(q(-1, 1), q(2, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo(), &q(-3, 4));
        assert_eq!(p.hi(), &q(3, 2));
        assert!(p.contains(&q(0, 1)));
        assert!(!p.contains(&q(2, 1)));
    }

    #[test]
    fn outward_rounding_encloses() {
        let x = RationalInterval::point(q(1, 3));
        let r = x.round_outward(10);
        assert!(r.contains(&q(1, 3)));
        assert!(r.width() <= q(1, 1024));
        assert!(r.contains_interval(&x));
    }
}
