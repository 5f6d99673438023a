use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::arith::{divisors, euler_phi, is_squarefree, mobius, prime_divisors};
use crate::error::{Error, Result};
use crate::interval::RationalInterval;

use super::euler_interval;

/// Data for the lower-bound density `δ(F')` used to prove `C_{E,1} > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaFprimeInput {
    /// Degree of the maximal abelian subfield of `Q(E[2])`: 2 or 3.
    pub d: u32,
    /// Odd squarefree product of the relevant primes of the level.
    pub r: u64,
    /// Least divisor of `r` whose cyclotomic field contains that subfield.
    pub s: u64,
    /// Adelic level; primes dividing it are left out of the tail product.
    pub level: u64,
    pub tail_primes_bound: u64,
}

#[derive(Debug, Clone)]
pub struct DeltaFprime {
    pub mobius_form: BigRational,
    pub closed_form: BigRational,
    pub tail: RationalInterval,
    pub value: RationalInterval,
}

fn q(n: i64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl DeltaFprimeInput {
    pub fn validate(&self) -> Result<()> {
        if self.d != 2 && self.d != 3 {
            return Err(Error::InvalidInput(format!("d = {} must be 2 or 3", self.d)));
        }
        if self.r.is_multiple_of(2) || !is_squarefree(self.r) {
            return Err(Error::InvalidInput(format!(
                "R = {} must be odd and squarefree",
                self.r
            )));
        }
        if self.s < 3 {
            return Err(Error::InvalidInput(format!("S = {} must be at least 3", self.s)));
        }
        if !self.r.is_multiple_of(self.s) {
            return Err(Error::NotADivisor {
                divisor: self.s,
                modulus: self.r,
            });
        }
        Ok(())
    }

    /// `Σ_{k | R} μ(k) (1/N'_k - 1/N'_{2k})`.
    pub fn mobius_form(&self) -> Result<BigRational> {
        self.validate()?;
        let mut acc = BigRational::zero();
        for k in divisors(self.r) {
            let phi = euler_phi(k);
            let n2k = if k % self.s == 0 { phi } else { self.d as u64 * phi };
            acc += (q(1, phi) - q(1, n2k)) * BigInt::from(mobius(k));
        }
        Ok(acc)
    }

    /// `(1/φ(S)) (1 - 1/d) ∏_{q | R/S} (1 - 1/φ(q)) (∏_{q | S} (φ(q) - 1) - μ(S))`.
    pub fn closed_form(&self) -> Result<BigRational> {
        self.validate()?;
        let mut acc = q(1, euler_phi(self.s)) * (BigRational::one() - q(1, self.d as u64));
        for p in prime_divisors(self.r / self.s) {
            acc *= BigRational::one() - q(1, p - 1);
        }
        let inner: i64 = prime_divisors(self.s).iter().map(|&p| p as i64 - 2).product();
        acc *= BigRational::from_integer(BigInt::from(inner - mobius(self.s) as i64));
        Ok(acc)
    }
}

pub fn delta_f_prime(input: &DeltaFprimeInput) -> Result<DeltaFprime> {
    let mobius_form = input.mobius_form()?;
    let closed_form = input.closed_form()?;
    if mobius_form != closed_form || !closed_form.is_positive() {
        return Err(Error::Internal(format!(
            "δ(F') forms disagree: {mobius_form} vs {closed_form}"
        )));
    }
    let tail = euler_interval(1, &prime_divisors(input.level), input.tail_primes_bound)?;
    let value = tail.scale(&closed_form);
    Ok(DeltaFprime {
        mobius_form,
        closed_form,
        tail,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(d: u32, r: u64, s: u64) -> DeltaFprimeInput {
        DeltaFprimeInput {
            d,
            r,
            s,
            level: 2 * r,
            tail_primes_bound: 100,
        }
    }

    #[test]
    fn small_cases() {
        assert_eq!(input(2, 3, 3).closed_form().unwrap(), q(1, 2));
        let r15 = input(2, 15, 15);
        assert_eq!(r15.closed_form().unwrap(), q(1, 8));
        assert_eq!(r15.mobius_form().unwrap(), q(1, 8));
        let v = delta_f_prime(&input(3, 105, 7)).unwrap();
        assert!(v.value.lo().is_positive());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(input(2, 15, 1).validate().is_err());
        assert!(input(2, 15, 7).validate().is_err());
        assert!(input(4, 15, 5).validate().is_err());
        assert!(input(2, 45, 5).validate().is_err());
        assert!(input(2, 30, 5).validate().is_err());
    }
}
