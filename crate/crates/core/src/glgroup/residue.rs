use crate::arith::gcd;
use crate::error::{Error, Result};

/// A subgroup of `(Z/kZ)^×`, stored as sorted residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueGroup {
    modulus: u32,
    elements: Vec<u32>,
}

impl ResidueGroup {
    pub fn new(modulus: u32, mut elements: Vec<u32>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::NonPositive("modulus"));
        }
        elements.iter_mut().for_each(|x| *x %= modulus);
        elements.sort_unstable();
        elements.dedup();
        let one = 1 % modulus;
        if !elements.contains(&one) {
            return Err(Error::InvalidInput("residue group must contain 1".into()));
        }
        if let Some(&x) = elements.iter().find(|&&x| gcd(x as u64, modulus as u64) != 1) {
            return Err(Error::InvalidInput(format!("{x} is not a unit modulo {modulus}")));
        }
        let k = modulus as u64;
        for &a in &elements {
            for &b in &elements {
                let prod = (a as u64 * b as u64 % k) as u32;
                if elements.binary_search(&prod).is_err() {
                    return Err(Error::InvalidInput(format!(
                        "residues not closed under multiplication mod {modulus}"
                    )));
                }
            }
        }
        Ok(Self { modulus, elements })
    }

    /// All of `(Z/kZ)^×`.
    pub fn units(modulus: u32) -> Self {
        let elements = (0..modulus)
            .filter(|&r| gcd(r as u64, modulus as u64) == 1)
            .collect::<Vec<_>>();
        let elements = if modulus == 1 { vec![0] } else { elements };
        Self { modulus, elements }
    }

    /// Units congruent to 1 modulo `j` (`j | k`): the kernel of
    /// `(Z/kZ)^× -> (Z/jZ)^×`.
    pub fn congruent_to_one(j: u32, modulus: u32) -> Result<Self> {
        if j == 0 || !modulus.is_multiple_of(j) {
            return Err(Error::NotADivisor {
                divisor: j as u64,
                modulus: modulus as u64,
            });
        }
        let units = Self::units(modulus);
        let elements = units.elements.into_iter().filter(|&u| u % j == 1 % j).collect();
        Ok(Self { modulus, elements })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, r: u32) -> bool {
        self.elements.binary_search(&(r % self.modulus)).is_ok()
    }
}
