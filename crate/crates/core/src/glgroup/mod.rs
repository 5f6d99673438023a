//! Finite matrix groups: `GL_2(Z/nZ)` arithmetic, subgroup enumeration and
//! the invariants the density formulas need.

pub mod closure;
pub mod matrix;
pub mod residue;
pub mod serre;

pub use closure::{
    close, commutator, commutator_subgroup, det_image, intersect_sl2, kernel_of_reduction, level, order_mod,
    order_mod_extended, Provenance, SubgroupClosure, DEFAULT_BUDGET,
};
pub use matrix::{mat_det, mat_inv, mat_mul, reduce_mat, MatrixEntries, ModMatrix, MAX_MODULUS};
pub use residue::ResidueGroup;
pub use serre::{epsilon, fundamental_discriminant, serre_level, serre_subgroup};

/// Element budget from `INVFACTOR_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var("INVFACTOR_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}
