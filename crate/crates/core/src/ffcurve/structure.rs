use std::collections::HashSet;

use serde::Serialize;

use crate::arith::{factor, gcd};
use crate::error::{Error, Result};

use super::count::{check_hasse, Point, ReducedCurve};
use super::curve::WeierstrassCurve;

/// `E(F_p) ≅ Z/d × Z/e` with `d | e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub p: u64,
    pub n: u64,
    pub d: u64,
    pub e: u64,
}

impl GroupStructure {
    fn check(&self) -> Result<()> {
        let ok = self.e.is_multiple_of(self.d) && self.d * self.e == self.n && (self.p - 1).is_multiple_of(self.d);
        if !ok {
            return Err(Error::Internal(format!("inconsistent group structure {self:?}")));
        }
        check_hasse(self.p, self.n)
    }
}

/// Group structure at a good prime.
///
/// Only primes `l` with `l | gcd(N, p - 1)` and `l^2 | N` can divide `d`. For
/// each, the `l`-Sylow subgroup is enumerated from projections of points and
/// `v_l(d)` is the largest `k` with `#Syl[l^k] = l^(2k)`.
pub fn group_structure(curve: &WeierstrassCurve, p: u64) -> Result<GroupStructure> {
    let r = ReducedCurve::new(curve, p)?;
    structure_of(&r)
}

pub(crate) fn structure_of(r: &ReducedCurve) -> Result<GroupStructure> {
    let p = r.p;
    let n = r.count();
    let g = gcd(n, p - 1);
    let mut d = 1u64;
    for (l, v) in factor(n) {
        if v < 2 || !g.is_multiple_of(l) {
            continue;
        }
        let size = l.pow(v);
        let sylow = sylow_subgroup(r, n / size, size);
        let mut k = 1;
        loop {
            let lk = l.pow(k);
            let killed = sylow.iter().filter(|&&s| r.mul(lk, s).is_none()).count() as u64;
            if killed != lk * lk {
                break;
            }
            d *= l;
            k += 1;
        }
    }
    let gs = GroupStructure { p, n, d, e: n / d };
    gs.check()?;
    Ok(gs)
}

fn sylow_subgroup(r: &ReducedCurve, cofactor: u64, size: u64) -> Vec<Point> {
    let mut members: HashSet<Point> = HashSet::from([None]);
    let mut list: Vec<Point> = vec![None];
    let mut x = 0;
    while (list.len() as u64) < size && x < r.p {
        if let Some(y) = r.lift(x) {
            let q = r.mul(cofactor, Some((x, y)));
            let base = list.clone();
            let mut t = q;
            while !members.contains(&t) {
                for &s in &base {
                    let u = r.add(s, t);
                    if members.insert(u) {
                        list.push(u);
                    }
                }
                t = r.add(t, q);
            }
        }
        x += 1;
    }
    list
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_two_torsion_has_even_d() {
        let e = WeierstrassCurve::from_i64([0, 0, 0, -7, 6]).unwrap();
        for p in [7u64, 11, 13, 17, 19, 23, 101, 997] {
            let gs = group_structure(&e, p).unwrap();
            assert_eq!(gs.d % 2, 0, "{gs:?}");
        }
    }

    #[test]
    fn cyclic_case() {
        let e = WeierstrassCurve::from_i64([0, 0, 0, 0, 1]).unwrap();
        let gs = group_structure(&e, 5).unwrap();
        assert_eq!((gs.n, gs.d, gs.e), (6, 1, 6));
    }
}
