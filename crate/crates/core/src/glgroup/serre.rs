use crate::arith::{is_squarefree, kronecker, lcm};
use crate::error::{Error, Result};

use super::closure::SubgroupClosure;
use super::matrix::ModMatrix;

/// Fundamental discriminant of `Q(sqrt(delta))` for squarefree `delta != 1`.
pub fn fundamental_discriminant(delta_sf: i64) -> Result<i64> {
    if delta_sf == 0 || delta_sf == 1 || !is_squarefree(delta_sf.unsigned_abs()) {
        return Err(Error::InvalidInput(format!(
            "{delta_sf} is not a squarefree integer other than 0 and 1"
        )));
    }
    Ok(if delta_sf.rem_euclid(4) == 1 {
        delta_sf
    } else {
        4 * delta_sf
    })
}

/// Level `lcm(2, |D|)` of the Serre subgroup attached to `delta_sf`.
pub fn serre_level(delta_sf: i64) -> Result<u32> {
    let d = fundamental_discriminant(delta_sf)?;
    let m = lcm(2, d.unsigned_abs());
    u32::try_from(m).map_err(|_| Error::ModulusTooLarge(m))
}

/// Sign of the permutation `g mod 2` induces on the three nonzero vectors of
/// `F_2^2`.
pub fn epsilon(g: &ModMatrix) -> i32 {
    let [a, b, c, d] = g.entries().map(|x| x % 2);
    let vectors = [(1u32, 0u32), (0, 1), (1, 1)];
    let index = |v: (u32, u32)| vectors.iter().position(|&w| w == v).expect("nonzero image");
    let perm: Vec<usize> = vectors
        .iter()
        .map(|&(x, y)| index(((a * x + b * y) % 2, (c * x + d * y) % 2)))
        .collect();
    let mut inversions = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Kernel of `epsilon * chi_D(det)` in `GL_2(Z/mZ)`, index two. `m` must be a
/// multiple of [`serre_level`].
pub fn serre_subgroup(delta_sf: i64, m: u32, budget: usize) -> Result<SubgroupClosure> {
    let disc = fundamental_discriminant(delta_sf)?;
    let level = serre_level(delta_sf)?;
    if !m.is_multiple_of(level) {
        return Err(Error::NotADivisor {
            divisor: level as u64,
            modulus: m as u64,
        });
    }
    SubgroupClosure::from_predicate(m, &format!("Serre({delta_sf})"), budget, |g| {
        epsilon(g) * kronecker(disc, g.det() as u64) == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glgroup::closure::DEFAULT_BUDGET;

    #[test]
    fn discriminants_and_levels() {
        assert_eq!(fundamental_discriminant(-1).unwrap(), -4);
        assert_eq!(fundamental_discriminant(5).unwrap(), 5);
        assert_eq!(fundamental_discriminant(-15).unwrap(), -15);
        assert_eq!(fundamental_discriminant(15).unwrap(), 60);
        assert_eq!(serre_level(-1).unwrap(), 4);
        assert_eq!(serre_level(5).unwrap(), 10);
        assert_eq!(serre_level(-5).unwrap(), 20);
        assert_eq!(serre_level(21).unwrap(), 42);
        assert!(serre_level(4).is_err());
        assert!(serre_level(1).is_err());
        assert!(serre_level(0).is_err());
    }

    #[test]
    fn epsilon_is_sign_on_gl2_f2() {
        let id = ModMatrix::identity(2);
        assert_eq!(epsilon(&id), 1);
        let t = ModMatrix::new(2, [1, 1, 0, 1]).unwrap();
        assert_eq!(epsilon(&t), -1);
        let r = ModMatrix::new(2, [0, 1, 1, 1]).unwrap();
        assert_eq!(epsilon(&r), 1);
    }

    #[test]
    fn serre_subgroup_has_index_two() {
        for (delta, m) in [(-1i64, 4u32), (5, 10), (-5, 20), (-15, 30)] {
            let h = serre_subgroup(delta, m, DEFAULT_BUDGET).unwrap();
            let full = crate::arith::psi(m as u64).unwrap() as u64;
            assert_eq!(h.order() * 2, full, "delta {delta}");
            assert!(h.det_is_surjective());
        }
        assert!(serre_subgroup(-1, 6, DEFAULT_BUDGET).is_err());
    }
}
