use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Mutex;

use crate::arith::{self, divisors, gcd, psi};
use crate::error::{Error, Result};

use super::matrix::ModMatrix;
use super::residue::ResidueGroup;

/// Default cap on the number of elements a closure may enumerate.
pub const DEFAULT_BUDGET: usize = 1 << 26;

/// Moduli whose full matrix space `n^4` fits in this many bits use a dense
/// bitset for membership; larger ones fall back to hashing.
const DENSE_LIMIT: u64 = 1 << 30;

/// How a subgroup came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Generators,
    Predicate(String),
    Reduction { from: u32 },
    Kernel { j: u32 },
    Derived(String),
}

/// Membership structure over the codes of a fixed modulus.
pub(crate) enum CodeSet {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl CodeSet {
    pub(crate) fn new(modulus: u32) -> Self {
        let n = modulus as u64;
        let space = n * n * n * n;
        if space <= DENSE_LIMIT {
            CodeSet::Dense(vec![0; (space as usize).div_ceil(64)])
        } else {
            CodeSet::Sparse(HashSet::new())
        }
    }

    /// Returns true if the code was not present before.
    pub(crate) fn insert(&mut self, code: u64) -> bool {
        match self {
            CodeSet::Dense(bits) => {
                let (w, b) = ((code / 64) as usize, code % 64);
                let fresh = bits[w] & (1 << b) == 0;
                bits[w] |= 1 << b;
                fresh
            }
            CodeSet::Sparse(set) => set.insert(code),
        }
    }

    pub(crate) fn contains(&self, code: u64) -> bool {
        match self {
            CodeSet::Dense(bits) => bits[(code / 64) as usize] & (1 << (code % 64)) != 0,
            CodeSet::Sparse(set) => set.contains(&code),
        }
    }
}

/// An explicitly enumerated subgroup of `GL_2(Z/mZ)`.
///
/// Elements are held as sorted packed codes (see [`ModMatrix::code`]), so the
/// canonical order is lexicographic on `(a, b, c, d)`. Values are immutable
/// once built; orders of reductions are memoised behind a mutex.
pub struct SubgroupClosure {
    modulus: u32,
    generators: Vec<ModMatrix>,
    elements: Vec<u64>,
    provenance: Provenance,
    reduction_orders: Mutex<BTreeMap<u32, u64>>,
}

impl Clone for SubgroupClosure {
    fn clone(&self) -> Self {
        Self {
            modulus: self.modulus,
            generators: self.generators.clone(),
            elements: self.elements.clone(),
            provenance: self.provenance.clone(),
            reduction_orders: Mutex::new(self.reduction_orders.lock().unwrap().clone()),
        }
    }
}

impl fmt::Debug for SubgroupClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupClosure")
            .field("modulus", &self.modulus)
            .field("order", &self.elements.len())
            .field("generators", &self.generators)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl PartialEq for SubgroupClosure {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.elements == other.elements
    }
}

impl Eq for SubgroupClosure {}

/// Smallest multiplicatively closed set containing `generators` and `I`.
pub fn close(modulus: u32, generators: &[ModMatrix], budget: usize) -> Result<SubgroupClosure> {
    SubgroupClosure::close(modulus, generators, budget)
}

impl SubgroupClosure {
    pub fn close(modulus: u32, generators: &[ModMatrix], budget: usize) -> Result<Self> {
        let identity = ModMatrix::identity(modulus);
        for g in generators {
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch(modulus, g.modulus()));
            }
            if !g.is_invertible() {
                return Err(Error::NonUnitDeterminant { det: g.det(), modulus });
            }
        }
        let elements = bfs_closure(modulus, &[identity.code()], generators, budget)?;
        Ok(Self::from_sorted(
            modulus,
            generators.to_vec(),
            elements,
            Provenance::Generators,
        ))
    }

    /// The whole of `GL_2(Z/mZ)`.
    pub fn full(modulus: u32, budget: usize) -> Result<Self> {
        Self::from_predicate(modulus, "GL2", budget, |_| true)
    }

    /// Enumerate the invertible matrices mod `m` satisfying `keep`. The caller
    /// vouches that the selected set is a subgroup.
    pub fn from_predicate<F>(modulus: u32, label: &str, budget: usize, keep: F) -> Result<Self>
    where
        F: Fn(&ModMatrix) -> bool,
    {
        if modulus == 0 {
            return Err(Error::NonPositive("modulus"));
        }
        if modulus > super::matrix::MAX_MODULUS {
            return Err(Error::ModulusTooLarge(modulus as u64));
        }
        let n = modulus;
        let unit: Vec<bool> = (0..n).map(|r| gcd(r as u64, n as u64) == 1).collect();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let bc = (b as u64 * c as u64) % n as u64;
                    for d in 0..n {
                        let det = ((a as u64 * d as u64 + n as u64 - bc) % n as u64) as usize;
                        if !unit[det] {
                            continue;
                        }
                        let g = ModMatrix::from_reduced(n, [a, b, c, d]);
                        if keep(&g) {
                            if out.len() >= budget {
                                return Err(Error::BudgetExceeded { budget });
                            }
                            out.push(g.code());
                        }
                    }
                }
            }
        }
        Ok(Self::from_sorted(
            modulus,
            Vec::new(),
            out,
            Provenance::Predicate(label.to_string()),
        ))
    }

    /// The full preimage in `GL_2(Z/big Z)` of a subgroup mod `m`, `m | big`.
    pub fn full_preimage(&self, big: u32, budget: usize) -> Result<Self> {
        if !big.is_multiple_of(self.modulus) {
            return Err(Error::NotADivisor {
                divisor: self.modulus as u64,
                modulus: big as u64,
            });
        }
        let mut member = CodeSet::new(self.modulus);
        for &c in &self.elements {
            member.insert(c);
        }
        let m = self.modulus;
        let mut out = Self::from_predicate(big, "preimage", budget, |g| {
            let [a, b, c, d] = g.entries();
            member.contains(ModMatrix::from_reduced(m, [a % m, b % m, c % m, d % m]).code())
        })?;
        out.provenance = Provenance::Derived(format!("full preimage mod {big} of a group mod {m}"));
        Ok(out)
    }

    pub(crate) fn from_sorted(
        modulus: u32,
        generators: Vec<ModMatrix>,
        mut elements: Vec<u64>,
        provenance: Provenance,
    ) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self {
            modulus,
            generators,
            elements,
            provenance,
            reduction_orders: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn generators(&self) -> &[ModMatrix] {
        &self.generators
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn codes(&self) -> &[u64] {
        &self.elements
    }

    /// Elements in canonical (lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = ModMatrix> + '_ {
        let m = self.modulus;
        self.elements.iter().map(move |&c| ModMatrix::from_code(m, c))
    }

    pub fn contains(&self, g: &ModMatrix) -> bool {
        g.modulus() == self.modulus && self.elements.binary_search(&g.code()).is_ok()
    }

    fn check_divisor(&self, d: u64) -> Result<u32> {
        if d == 0 || !(self.modulus as u64).is_multiple_of(d) {
            return Err(Error::NotADivisor {
                divisor: d,
                modulus: self.modulus as u64,
            });
        }
        Ok(d as u32)
    }

    /// Image of the subgroup under reduction mod `d`.
    pub fn reduce(&self, d: u64) -> Result<SubgroupClosure> {
        let d = self.check_divisor(d)?;
        let mut seen = CodeSet::new(d);
        let mut out = Vec::new();
        for g in self.elements() {
            let r = g.reduce(d)?;
            if seen.insert(r.code()) {
                out.push(r.code());
            }
        }
        let gens = self
            .generators
            .iter()
            .map(|g| g.reduce(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_sorted(
            d,
            gens,
            out,
            Provenance::Reduction { from: self.modulus },
        ))
    }

    /// `|H mod d|` for a divisor `d` of the modulus.
    pub fn order_mod(&self, d: u64) -> Result<u64> {
        let d = self.check_divisor(d)?;
        if d == self.modulus {
            return Ok(self.order());
        }
        if let Some(&v) = self.reduction_orders.lock().unwrap().get(&d) {
            return Ok(v);
        }
        let mut seen = CodeSet::new(d);
        let mut count = 0u64;
        for &c in &self.elements {
            let g = ModMatrix::from_code(self.modulus, c);
            let [a, b, cc, e] = g.entries();
            if seen.insert(ModMatrix::from_reduced(d, [a % d, b % d, cc % d, e % d]).code()) {
                count += 1;
            }
        }
        self.reduction_orders.lock().unwrap().insert(d, count);
        Ok(count)
    }

    /// `|H mod n|` for arbitrary `n`, assuming the level of the underlying open
    /// group divides the modulus. Prime powers of `n` beyond those of the
    /// modulus contribute `psi(p)` for the first power of a new prime and `p^4`
    /// for every further power.
    pub fn order_mod_extended(&self, n: u64) -> Result<u128> {
        if n == 0 {
            return Err(Error::NonPositive("n"));
        }
        let m = self.modulus as u64;
        let base = gcd(n, m);
        let mut acc = self.order_mod(base)? as u128;
        for (p, e) in arith::factor(n) {
            let vm = arith::valuation(m, p);
            if e <= vm {
                continue;
            }
            let mut extra = e - vm;
            if vm == 0 {
                acc = acc.checked_mul(psi(p)?).ok_or(Error::Overflow("|H mod n|"))?;
                extra -= 1;
            }
            for _ in 0..extra {
                acc = acc
                    .checked_mul((p as u128).pow(4))
                    .ok_or(Error::Overflow("|H mod n|"))?;
            }
        }
        Ok(acc)
    }

    /// `H ∩ Γ_j`, still over the full modulus.
    pub fn kernel_of_reduction(&self, j: u64) -> Result<SubgroupClosure> {
        let j = self.check_divisor(j)?;
        let codes = self
            .elements()
            .filter(|g| g.is_identity_mod(j))
            .map(|g| g.code())
            .collect();
        Ok(Self::from_sorted(
            self.modulus,
            Vec::new(),
            codes,
            Provenance::Kernel { j },
        ))
    }

    /// Least divisor `d` of the modulus such that the group is the full
    /// preimage of its reduction mod `d`. Computed relative to the stored
    /// modulus only.
    pub fn level(&self) -> u64 {
        let m = self.modulus as u64;
        let total = psi(m).expect("modulus is positive");
        for d in divisors(m) {
            let small = psi(d).expect("divisor is positive");
            let reduced = self.order_mod(d).expect("d divides m") as u128;
            if self.order() as u128 * small == reduced * total {
                return d;
            }
        }
        m
    }

    /// `{ det(h) mod k : h in H }`.
    pub fn det_image(&self, k: u64) -> Result<ResidueGroup> {
        let k = self.check_divisor(k)?;
        let mut seen = vec![false; k as usize];
        for g in self.elements() {
            seen[(g.det() % k) as usize] = true;
        }
        let elements = (0..k).filter(|&r| seen[r as usize]).collect();
        ResidueGroup::new(k, elements)
    }

    pub fn det_is_surjective(&self) -> bool {
        let units = ResidueGroup::units(self.modulus);
        self.det_image(self.modulus as u64)
            .map(|img| img == units)
            .unwrap_or(false)
    }

    /// Elements of determinant one.
    pub fn intersect_sl2(&self) -> SubgroupClosure {
        let one = 1 % self.modulus;
        let codes = self.elements().filter(|g| g.det() == one).map(|g| g.code()).collect();
        Self::from_sorted(
            self.modulus,
            Vec::new(),
            codes,
            Provenance::Derived("intersection with SL2".into()),
        )
    }

    /// A generating set: the recorded generators if any, otherwise one picked
    /// greedily along a fixed stride through the elements.
    pub fn generating_set(&self, budget: usize) -> Result<Vec<ModMatrix>> {
        if !self.generators.is_empty() || self.order() == 1 {
            return Ok(self.generators.clone());
        }
        let len = self.elements.len();
        let stride = {
            let mut s = (len as u64 / 3 + 7) | 1;
            while gcd(s, len as u64) != 1 {
                s += 2;
            }
            s as usize
        };
        let identity = ModMatrix::identity(self.modulus).code();
        let mut gens: Vec<ModMatrix> = Vec::new();
        let mut current: Vec<u64> = vec![identity];
        let mut idx = 0usize;
        while current.len() < len {
            let code = self.elements[idx];
            idx = (idx + stride) % len;
            if current.binary_search(&code).is_ok() {
                continue;
            }
            gens.push(ModMatrix::from_code(self.modulus, code));
            current = bfs_closure(self.modulus, &[identity], &gens, budget)?;
            current.sort_unstable();
        }
        Ok(gens)
    }

    /// `[H, H]`: normal closure of the commutators of a generating set.
    pub fn commutator_subgroup(&self, budget: usize) -> Result<SubgroupClosure> {
        let gens = self.generating_set(budget)?;
        let identity = ModMatrix::identity(self.modulus);
        let mut normal_gens: Vec<ModMatrix> = Vec::new();
        for a in &gens {
            for b in &gens {
                let c = commutator(a, b)?;
                if !c.is_identity() && !normal_gens.contains(&c) {
                    normal_gens.push(c);
                }
            }
        }
        let mut codes = bfs_closure(self.modulus, &[identity.code()], &normal_gens, budget)?;
        codes.sort_unstable();
        loop {
            let mut added = false;
            let snapshot = normal_gens.clone();
            for g in &gens {
                let gi = g.inv()?;
                for n in &snapshot {
                    let conj = g.mul(n)?.mul(&gi)?;
                    if codes.binary_search(&conj.code()).is_err() {
                        normal_gens.push(conj);
                        codes = bfs_closure(self.modulus, &[identity.code()], &normal_gens, budget)?;
                        codes.sort_unstable();
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        Ok(Self::from_sorted(
            self.modulus,
            normal_gens,
            codes,
            Provenance::Derived("commutator subgroup".into()),
        ))
    }
}

pub fn commutator(a: &ModMatrix, b: &ModMatrix) -> Result<ModMatrix> {
    a.mul(b)?.mul(&a.inv()?)?.mul(&b.inv()?)
}

/// Breadth-first product closure starting from `seeds`. Finite groups need no
/// inverses: right multiplication by generators reaches every element.
pub(crate) fn bfs_closure(modulus: u32, seeds: &[u64], generators: &[ModMatrix], budget: usize) -> Result<Vec<u64>> {
    let mut seen = CodeSet::new(modulus);
    let mut out: Vec<u64> = Vec::new();
    for &s in seeds {
        if seen.insert(s) {
            out.push(s);
        }
    }
    let mut head = 0;
    while head < out.len() {
        let x = ModMatrix::from_code(modulus, out[head]);
        head += 1;
        for g in generators {
            let y = x.mul_unchecked(g).code();
            if seen.insert(y) {
                if out.len() >= budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                out.push(y);
            }
        }
    }
    Ok(out)
}

pub fn order_mod(h: &SubgroupClosure, d: u64) -> Result<u64> {
    h.order_mod(d)
}

pub fn order_mod_extended(h: &SubgroupClosure, n: u64) -> Result<u128> {
    h.order_mod_extended(n)
}

pub fn kernel_of_reduction(h: &SubgroupClosure, j: u64) -> Result<SubgroupClosure> {
    h.kernel_of_reduction(j)
}

pub fn level(h: &SubgroupClosure) -> u64 {
    h.level()
}

pub fn det_image(h: &SubgroupClosure, k: u64) -> Result<ResidueGroup> {
    h.det_image(k)
}

pub fn commutator_subgroup(h: &SubgroupClosure, budget: usize) -> Result<SubgroupClosure> {
    h.commutator_subgroup(budget)
}

pub fn intersect_sl2(h: &SubgroupClosure) -> SubgroupClosure {
    h.intersect_sl2()
}
