use num::bigint::BigInt;
use num::ToPrimitive;

use crate::error::{Error, Result};

use super::curve::WeierstrassCurve;

/// A point of `y^2 = x^3 + A x + B` over `F_p`; `None` is the point at
/// infinity.
pub type Point = Option<(u64, u64)>;

/// The reduction of a curve modulo a good prime `p > 3`, in short form, with
/// lookup tables for square roots.
pub struct ReducedCurve {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    /// `sqrt[v]` is some square root of `v`, or `u32::MAX` for non-squares.
    sqrt: Vec<u32>,
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = r.to_i64().expect("residue fits");
    r.rem_euclid(p as i64) as u64
}

impl ReducedCurve {
    pub fn new(curve: &WeierstrassCurve, p: u64) -> Result<Self> {
        if !curve.good_reduction(p) {
            return Err(Error::BadReduction(p));
        }
        if p > 1 << 31 {
            return Err(Error::InvalidInput(format!("prime {p} is too large")));
        }
        let (a, b) = curve.short_coefficients();
        let mut sqrt = vec![u32::MAX; p as usize];
        for y in 0..p {
            let v = (y * y % p) as usize;
            if sqrt[v] == u32::MAX {
                sqrt[v] = y as u32;
            }
        }
        Ok(Self {
            p,
            a: reduce(&a, p),
            b: reduce(&b, p),
            sqrt,
        })
    }

    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        ((x * x % p * x) % p + self.a * x % p + self.b) % p
    }

    /// `1 + Σ_x (1 + (f(x)/p))`.
    pub fn count(&self) -> u64 {
        let mut n = 1;
        for x in 0..self.p {
            let v = self.rhs(x);
            if v == 0 {
                n += 1;
            } else if self.sqrt[v as usize] != u32::MAX {
                n += 2;
            }
        }
        n
    }

    /// Some `y` with `y^2 = f(x)`, if one exists.
    pub fn lift(&self, x: u64) -> Option<u64> {
        let s = self.sqrt[self.rhs(x) as usize];
        (s != u32::MAX).then_some(s as u64)
    }

    fn inv(&self, v: u64) -> u64 {
        crate::arith::pow_mod(v, self.p - 2, self.p)
    }

    pub fn neg(&self, pt: Point) -> Point {
        pt.map(|(x, y)| (x, (self.p - y) % self.p))
    }

    pub fn add(&self, s: Point, t: Point) -> Point {
        let p = self.p;
        let ((x1, y1), (x2, y2)) = match (s, t) {
            (None, _) => return t,
            (_, None) => return s,
            (Some(a), Some(b)) => (a, b),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return None;
            }
            (3 * x1 % p * x1 % p + self.a) % p * self.inv(2 * y1 % p) % p
        } else {
            (y2 + p - y1) % p * self.inv((x2 + p - x1) % p) % p
        };
        let x3 = (lambda * lambda % p + 2 * p - x1 - x2) % p;
        let y3 = (lambda * ((x1 + p - x3) % p) % p + p - y1) % p;
        Some((x3, y3))
    }

    pub fn mul(&self, mut k: u64, pt: Point) -> Point {
        let mut acc = None;
        let mut base = pt;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// All points, infinity first.
    pub fn points(&self) -> Vec<Point> {
        let mut out = vec![None];
        for x in 0..self.p {
            if let Some(y) = self.lift(x) {
                out.push(Some((x, y)));
                if y != 0 {
                    out.push(Some((x, self.p - y)));
                }
            }
        }
        out
    }
}

/// `#E(F_p)` for a prime of good reduction, checked against the Hasse bound.
pub fn count_points(curve: &WeierstrassCurve, p: u64) -> Result<u64> {
    let n = ReducedCurve::new(curve, p)?.count();
    check_hasse(p, n)?;
    Ok(n)
}

pub(crate) fn check_hasse(p: u64, n: u64) -> Result<()> {
    let diff = (n as i128 - (p as i128 + 1)).unsigned_abs();
    if diff * diff > 4 * p as u128 {
        return Err(Error::Internal(format!("Hasse bound violated: N = {n} at p = {p}")));
    }
    Ok(())
}
