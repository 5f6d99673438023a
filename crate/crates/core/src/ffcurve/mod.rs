//! Reductions of elliptic curves modulo primes: point counts, group
//! structure and empirical invariant-factor statistics.

pub mod count;
pub mod curve;
pub mod empirical;
pub mod li;
pub mod structure;

pub use count::{count_points, Point, ReducedCurve};
pub use curve::WeierstrassCurve;
pub use empirical::{
    empirical_density, empirical_table, structures_up_to, EmpiricalDensity, EmpiricalTable, DEFAULT_PRIME_BOUND,
};
pub use li::li;
pub use structure::{group_structure, GroupStructure};
