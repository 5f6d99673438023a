//! Elementary integer arithmetic shared by every module: factorisation,
//! multiplicative functions, modular inverses and quadratic symbols.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Prime factorisation by trial division, primes in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    factor(n).len() == 1 && factor(n)[0].1 == 1
}

/// Sieve of Eratosthenes; all primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn radical(n: u64) -> u64 {
    prime_divisors(n).into_iter().product()
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factor(n).iter().all(|&(_, e)| e == 1)
}

/// All positive divisors of `n`, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The Möbius function.
pub fn mobius(k: u64) -> i32 {
    assert!(k >= 1, "mobius is defined on positive integers");
    let f = factor(k);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Order of `GL_2(Z/nZ)`: `n^4 * prod_{p | n} (1 - 1/p)(1 - 1/p^2)`.
pub fn psi(n: u64) -> Result<u128> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let mut acc: u128 = 1;
    for (p, e) in factor(n) {
        let p = p as u128;
        // psi(p^e) = p^(4(e-1)) * (p^2 - 1)(p^2 - p)
        let base = (p * p - 1).checked_mul(p * p - p).ok_or(Error::Overflow("psi"))?;
        acc = acc.checked_mul(base).ok_or(Error::Overflow("psi"))?;
        for _ in 1..e {
            acc = acc.checked_mul(p * p * p * p).ok_or(Error::Overflow("psi"))?;
        }
    }
    Ok(acc)
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn mod_inv(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % n as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for positive `n`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    assert!(n >= 1);
    let v = valuation(n, 2);
    let odd = n >> v;
    let two = if v == 0 {
        1
    } else if d % 2 == 0 {
        0
    } else {
        match d.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        }
    };
    let two = if v.is_multiple_of(2) && two != 0 { 1 } else { two };
    two * jacobi(d, odd)
}

/// Squarefree part of a nonzero integer, keeping its sign.
///
/// Trial division up to `10^6`; the cofactor must then be a prime, a prime
/// square or `1`, which covers every discriminant handled here.
pub fn squarefree_part(n: i128) -> Result<i128> {
    if n == 0 {
        return Err(Error::InvalidInput("squarefree part of zero".into()));
    }
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut out: u128 = 1;
    let mut p: u128 = 2;
    while p <= 1_000_000 && p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            if e % 2 == 1 {
                out *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        if p * p > m {
            out *= m;
        } else {
            let r = isqrt_u128(m);
            if r * r == m {
                // a square cofactor contributes nothing
            } else if m < 1_000_000u128 * 1_000_000 {
                out *= m;
            } else {
                return Err(Error::InvalidInput(format!("cannot factor cofactor {m} of {n}")));
            }
        }
    }
    Ok(sign * out as i128)
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// All squarefree products of subsets of `primes`, each with its Möbius sign.
pub fn squarefree_subsets(primes: &[u64]) -> Vec<(u64, i32)> {
    let mut out = vec![(1u64, 1i32)];
    for &p in primes {
        let len = out.len();
        for i in 0..len {
            let (k, mu) = out[i];
            out.push((k * p, -mu));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn psi_small_values() {
        assert_eq!(psi(1).unwrap(), 1);
        assert_eq!(psi(2).unwrap(), 6);
        assert_eq!(psi(3).unwrap(), 48);
        assert_eq!(psi(6).unwrap(), 288);
        assert_eq!(psi(4).unwrap(), 96);
        assert!(psi(0).is_err());
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn inverse_and_symbols() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(jacobi(2, 7), 1);
        assert_eq!(jacobi(3, 7), -1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(-6400).unwrap(), -1);
        assert_eq!(squarefree_part(3i128.pow(9) * 7i128.pow(3)).unwrap(), 21);
        assert_eq!(squarefree_part(37).unwrap(), 37);
    }

    #[test]
    fn kronecker_is_periodic_mod_fundamental_discriminant() {
        for d in [-4i64, 5, -20, 60, -15, 21, 12, -3, 8, -8, 24] {
            let f = d.unsigned_abs();
            for n in 1..200u64 {
                if gcd(n, f) == 1 {
                    assert_eq!(kronecker(d, n), kronecker(d, n + f), "d={d} n={n}");
                }
            }
        }
    }
}
