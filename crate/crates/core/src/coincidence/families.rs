use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{is_squarefree, prime_divisors};
use crate::error::{Error, Result};
use crate::ffcurve::WeierstrassCurve;
use crate::glgroup::MatrixEntries;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedImage {
    pub modulus: u32,
    pub generators: Vec<MatrixEntries>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyPoint {
    pub family: String,
    pub t: String,
    pub twist: Option<i64>,
    /// `[a1, a2, a3, a4, a6]` as decimal strings.
    pub coefficients: [String; 5],
    pub scaling: String,
    pub predicted_image: Option<PredictedImage>,
    #[serde(skip)]
    pub curve: WeierstrassCurve,
}

/// A one-parameter family `y^2 = x^3 + A(t) x + B(t)`.
pub trait CurveFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// `(A(t), B(t))` before twisting or clearing denominators.
    fn short_model(&self, t: &BigRational) -> (BigRational, BigRational);
    fn accepts_twist(&self) -> bool {
        false
    }
    fn predicted_image(&self, _twist: Option<i64>) -> Option<PredictedImage> {
        None
    }
}

fn poly(t: &BigRational, coeffs: &[(u32, i64)]) -> BigRational {
    coeffs.iter().fold(BigRational::zero(), |acc, &(e, c)| {
        acc + BigRational::from_integer(BigInt::from(c)) * num::pow(t.clone(), e as usize)
    })
}

fn gens(modulus: u32, g: &[[i64; 4]]) -> Option<PredictedImage> {
    Some(PredictedImage {
        modulus,
        generators: g.iter().map(|&e| MatrixEntries(e)).collect(),
    })
}

struct X60d;
struct X60Twist;
struct X27h;
struct X187i;
struct Hesse;

fn x60d_model(t: &BigRational) -> (BigRational, BigRational) {
    (
        poly(t, &[(8, -432), (4, 1512), (0, -27)]),
        poly(t, &[(12, 3456), (8, 28512), (4, -7128), (0, -54)]),
    )
}

impl CurveFamily for X60d {
    fn name(&self) -> &'static str {
        "X60d"
    }
    fn summary(&self) -> &'static str {
        "mod-4 image {I, [[1,1],[0,-1]]}; Q(E[4]) = Q(E[2]) = Q(i)"
    }
    fn short_model(&self, t: &BigRational) -> (BigRational, BigRational) {
        x60d_model(t)
    }
    fn predicted_image(&self, _twist: Option<i64>) -> Option<PredictedImage> {
        gens(4, &[[1, 1, 0, -1]])
    }
}

impl CurveFamily for X60Twist {
    fn name(&self) -> &'static str {
        "X60_twist"
    }
    fn summary(&self) -> &'static str {
        "quadratic twists of X60d by a squarefree integer"
    }
    fn short_model(&self, t: &BigRational) -> (BigRational, BigRational) {
        x60d_model(t)
    }
    fn accepts_twist(&self) -> bool {
        true
    }
    fn predicted_image(&self, _twist: Option<i64>) -> Option<PredictedImage> {
        gens(4, &[[1, 1, 0, -1], [-1, 0, 0, -1]])
    }
}

impl CurveFamily for X27h {
    fn name(&self) -> &'static str {
        "X27h"
    }
    fn summary(&self) -> &'static str {
        "mod-4 image inside <[[1,1],[0,-1]], [[1,2],[0,1]]>; Q(E[4]) = Q(i, sqrt t)"
    }
    fn short_model(&self, t: &BigRational) -> (BigRational, BigRational) {
        (
            poly(t, &[(4, -432), (2, 1512), (0, -27)]),
            poly(t, &[(6, 3456), (4, 28512), (2, -7128), (0, -54)]),
        )
    }
    fn predicted_image(&self, _twist: Option<i64>) -> Option<PredictedImage> {
        gens(4, &[[1, 1, 0, -1], [1, 2, 0, 1]])
    }
}

impl CurveFamily for X187i {
    fn name(&self) -> &'static str {
        "X187i"
    }
    fn summary(&self) -> &'static str {
        "elementary abelian mod-8 image with kernel mod 4 in SL2"
    }
    fn short_model(&self, t: &BigRational) -> (BigRational, BigRational) {
        (
            poly(t, &[(16, -108), (8, -24192), (0, -27648)]),
            poly(t, &[(24, -432), (16, 228096), (8, 3649536), (0, -1769472)]),
        )
    }
}

impl CurveFamily for Hesse {
    fn name(&self) -> &'static str {
        "Hesse"
    }
    fn summary(&self) -> &'static str {
        "Hesse pencil x^3 + y^3 + z^3 = 3txyz; Q(E[3]) contains Q(zeta3)"
    }
    fn short_model(&self, t: &BigRational) -> (BigRational, BigRational) {
        (
            poly(t, &[(4, -27), (1, -216)]),
            poly(t, &[(6, 54), (3, -1080), (0, -432)]),
        )
    }
}

/// Name-keyed registry of curve families.
pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Box<dyn CurveFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        Self {
            families: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(X60d));
        r.register(Box::new(X60Twist));
        r.register(Box::new(X27h));
        r.register(Box::new(X187i));
        r.register(Box::new(Hesse));
        r
    }

    pub fn register(&mut self, f: Box<dyn CurveFamily>) {
        self.families.insert(f.name(), f);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CurveFamily> {
        self.families
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    pub fn instantiate(&self, name: &str, t: &BigRational, twist: Option<i64>) -> Result<FamilyPoint> {
        instantiate_with(self.get(name)?, t, twist)
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

pub fn family_instantiate(family: &str, t: &BigRational, twist: Option<i64>) -> Result<FamilyPoint> {
    FamilyRegistry::builtin().instantiate(family, t, twist)
}

fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let v = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0i64;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        k
    };
    Some(v(x.numer()) - v(x.denom()))
}

/// Least positive `u` with `u^4 a4` and `u^6 a6` integral, given every prime
/// that can divide their denominators.
pub fn clearing_factor(a4: &BigRational, a6: &BigRational, primes: &[u64]) -> BigInt {
    let mut u = BigInt::one();
    for &p in primes {
        let need = |x: &BigRational, w: i64| match rational_valuation(x, p) {
            Some(v) if v < 0 => (-v + w - 1) / w,
            _ => 0,
        };
        let e = need(a4, 4).max(need(a6, 6));
        u *= num::pow(BigInt::from(p), e as usize);
    }
    u
}

fn instantiate_with(f: &dyn CurveFamily, t: &BigRational, twist: Option<i64>) -> Result<FamilyPoint> {
    match twist {
        Some(_) if !f.accepts_twist() => {
            return Err(Error::InvalidInput(format!("family {} takes no twist", f.name())))
        }
        None if f.accepts_twist() => return Err(Error::InvalidInput(format!("family {} needs a twist", f.name()))),
        Some(d) if d == 0 || d == 1 || !is_squarefree(d.unsigned_abs()) => {
            return Err(Error::InvalidInput(format!(
                "twist {d} is not a squarefree integer other than 1"
            )))
        }
        _ => {}
    }
    let (mut a4, mut a6) = f.short_model(t);
    if let Some(d) = twist {
        let d = BigRational::from_integer(BigInt::from(d));
        a4 = a4 * &d * &d;
        a6 = a6 * &d * &d * &d;
    }
    let den = t
        .denom()
        .to_u64()
        .ok_or_else(|| Error::InvalidInput("parameter denominator exceeds 64 bits".into()))?;
    let u = clearing_factor(&a4, &a6, &prime_divisors(den));
    let u2 = BigRational::from_integer(&u * &u);
    let a4 = a4 * &u2 * &u2;
    let a6 = a6 * &u2 * &u2 * &u2;
    if !a4.is_integer() || !a6.is_integer() {
        return Err(Error::Internal("clearing factor left a denominator".into()));
    }
    let curve = WeierstrassCurve::short(a4.to_integer(), a6.to_integer())?;
    let c = curve.coefficients();
    Ok(FamilyPoint {
        family: f.name().to_string(),
        t: t.to_string(),
        twist,
        coefficients: [0, 1, 2, 3, 4].map(|i| c[i].to_string()),
        scaling: u.to_string(),
        predicted_image: f.predicted_image(twist),
        curve,
    })
}

/// `-16 (4 A^3 + 27 B^2)` over the rationals.
pub fn short_discriminant(a4: &BigRational, a6: &BigRational) -> BigRational {
    let c = |n: i64| BigRational::from_integer(BigInt::from(n));
    c(-16) * (c(4) * a4 * a4 * a4 + c(27) * a6 * a6)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn x187i_at_one_is_960a5() {
        let p = family_instantiate("X187i", &q(1, 1), None).unwrap();
        assert_eq!(p.coefficients[3], "-51948");
        assert_eq!(p.coefficients[4], "2107728");
        assert_eq!(p.scaling, "1");
        let lmfdb = WeierstrassCurve::from_i64([0, -1, 0, -641, 3105]).unwrap();
        let (a, b) = lmfdb.short_coefficients();
        assert_eq!(a, BigInt::from(-51948) * 16);
        assert_eq!(b, BigInt::from(2107728) * 64);
    }

    #[test]
    fn hesse() {
        let p = family_instantiate("Hesse", &q(2, 1), None).unwrap();
        assert_eq!(p.curve.discriminant_squarefree_part().unwrap(), 21);
        assert!(matches!(
            family_instantiate("Hesse", &q(1, 1), None),
            Err(Error::SingularModel)
        ));
        let f = Hesse;
        let t = q(-3, 7);
        let (a4, a6) = f.short_model(&t);
        let t3 = &t * &t * &t - BigRational::one();
        let expected = q(4096 * 19683, 1) * &t3 * &t3 * &t3;
        assert_eq!(short_discriminant(&a4, &a6), expected);
        let point = family_instantiate("Hesse", &t, None).unwrap();
        assert_eq!(point.scaling, "7");
    }

    #[test]
    fn twists_and_validation() {
        let base = family_instantiate("X60d", &q(1, 1), None).unwrap();
        assert_eq!(base.coefficients[3], "1053");
        assert_eq!(base.coefficients[4], "24786");
        assert_eq!(base.curve.two_division_degree(), 2);
        let tw = family_instantiate("X60_twist", &q(1, 1), Some(-3)).unwrap();
        assert_eq!(tw.coefficients[3], "9477");
        assert_eq!(tw.predicted_image.unwrap().generators.len(), 2);
        assert!(family_instantiate("X60_twist", &q(1, 1), Some(4)).is_err());
        assert!(family_instantiate("X60d", &q(1, 1), Some(3)).is_err());
        assert!(family_instantiate("X99", &q(1, 1), None).is_err());
        assert_eq!(family_instantiate("X27h", &q(1, 2), None).unwrap().scaling, "1");
        assert_eq!(family_instantiate("X27h", &q(1, 3), None).unwrap().scaling, "3");
    }
}
