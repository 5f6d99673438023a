use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, mod_inv};
use crate::error::{Error, Result};

/// Largest modulus whose matrices still pack into a single `u64` code.
pub const MAX_MODULUS: u32 = 65_535;

/// A 2x2 matrix over `Z/nZ`, entries stored row-major and fully reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModMatrix {
    modulus: u32,
    entries: [u32; 4],
}

impl ModMatrix {
    pub fn new(modulus: u32, entries: [i64; 4]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::NonPositive("modulus"));
        }
        if modulus > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(modulus as u64));
        }
        let n = modulus as i64;
        let e = entries.map(|x| x.rem_euclid(n) as u32);
        Ok(Self { modulus, entries: e })
    }

    pub fn identity(modulus: u32) -> Self {
        Self::new(modulus, [1, 0, 0, 1]).expect("identity with valid modulus")
    }

    /// Like [`ModMatrix::new`], but additionally requires a unit determinant.
    pub fn invertible(modulus: u32, entries: [i64; 4]) -> Result<Self> {
        let m = Self::new(modulus, entries)?;
        if !m.is_invertible() {
            return Err(Error::NonUnitDeterminant { det: m.det(), modulus });
        }
        Ok(m)
    }

    pub(crate) fn from_reduced(modulus: u32, entries: [u32; 4]) -> Self {
        debug_assert!(entries.iter().all(|&x| x < modulus));
        Self { modulus, entries }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    /// Lexicographic packing of `(a, b, c, d)` into one word. Codes of a fixed
    /// modulus sort in the same order as the matrices themselves.
    pub fn code(&self) -> u64 {
        let n = self.modulus as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        ((a * n + b) * n + c) * n + d
    }

    pub fn from_code(modulus: u32, code: u64) -> Self {
        let n = modulus as u64;
        let d = code % n;
        let c = (code / n) % n;
        let b = (code / (n * n)) % n;
        let a = code / (n * n * n);
        Self::from_reduced(modulus, [a as u32, b as u32, c as u32, d as u32])
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &ModMatrix) -> ModMatrix {
        let n = self.modulus as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        let [e, f, g, h] = other.entries.map(u64::from);
        ModMatrix::from_reduced(
            self.modulus,
            [
                ((a * e + b * g) % n) as u32,
                ((a * f + b * h) % n) as u32,
                ((c * e + d * g) % n) as u32,
                ((c * f + d * h) % n) as u32,
            ],
        )
    }

    pub fn det(&self) -> u32 {
        let n = self.modulus as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        ((a * d % n + n - b * c % n) % n) as u32
    }

    pub fn is_invertible(&self) -> bool {
        gcd(self.det() as u64, self.modulus as u64) == 1
    }

    /// Adjugate times the inverse of the determinant.
    pub fn inv(&self) -> Result<ModMatrix> {
        let n = self.modulus as u64;
        let det = self.det();
        let di = mod_inv(det as u64, n).ok_or(Error::NonUnitDeterminant {
            det,
            modulus: self.modulus,
        })?;
        let [a, b, c, d] = self.entries.map(u64::from);
        let neg = |x: u64| (n - x % n) % n;
        Ok(ModMatrix::from_reduced(
            self.modulus,
            [
                (d * di % n) as u32,
                (neg(b) * di % n) as u32,
                (neg(c) * di % n) as u32,
                (a * di % n) as u32,
            ],
        ))
    }

    /// Reduction to a divisor `d` of the modulus.
    pub fn reduce(&self, d: u32) -> Result<ModMatrix> {
        if d == 0 || !self.modulus.is_multiple_of(d) {
            return Err(Error::NotADivisor {
                divisor: d as u64,
                modulus: self.modulus as u64,
            });
        }
        Ok(ModMatrix::from_reduced(d, self.entries.map(|x| x % d)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus)
    }

    /// Whether the matrix reduces to the identity modulo `d` (`d` must divide
    /// the modulus).
    pub fn is_identity_mod(&self, d: u32) -> bool {
        let [a, b, c, e] = self.entries;
        a % d == 1 % d && b % d == 0 && c % d == 0 && e % d == 1 % d
    }
}

/// Row-major product in GL_2(Z/nZ).
pub fn mat_mul(a: &ModMatrix, b: &ModMatrix) -> Result<ModMatrix> {
    a.mul(b)
}

pub fn mat_det(a: &ModMatrix) -> u32 {
    a.det()
}

pub fn mat_inv(a: &ModMatrix) -> Result<ModMatrix> {
    a.inv()
}

pub fn reduce_mat(a: &ModMatrix, d: u32) -> Result<ModMatrix> {
    a.reduce(d)
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.modulus)
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Wire form of a matrix: `[a, b, c, d]`, row-major. The modulus travels
/// separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixEntries(pub [i64; 4]);

impl MatrixEntries {
    pub fn to_matrix(self, modulus: u32) -> Result<ModMatrix> {
        ModMatrix::new(modulus, self.0)
    }
}

impl From<&ModMatrix> for MatrixEntries {
    fn from(m: &ModMatrix) -> Self {
        MatrixEntries(m.entries.map(i64::from))
    }
}
