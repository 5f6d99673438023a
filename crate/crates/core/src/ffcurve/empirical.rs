use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::primes_up_to;
use crate::error::{Error, Result};

use super::count::ReducedCurve;
use super::curve::WeierstrassCurve;
use super::li::li;
use super::structure::{structure_of, GroupStructure};

pub const DEFAULT_PRIME_BOUND: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDensity {
    pub j: u64,
    pub x: u64,
    pub hits: u64,
    pub good_count: u64,
    pub li_x: f64,
    pub ratio: f64,
}

/// Group structures at all good primes `p <= x`, ascending in `p`.
pub fn structures_up_to(curve: &WeierstrassCurve, x: u64, max_x: u64) -> Result<Vec<GroupStructure>> {
    if x > max_x {
        return Err(Error::BudgetExceeded { budget: max_x as usize });
    }
    primes_up_to(x)
        .into_par_iter()
        .filter(|&p| curve.good_reduction(p))
        .map(|p| structure_of(&ReducedCurve::new(curve, p)?))
        .collect()
}

/// Count good `p <= x` with `d_{E,p} = j`.
pub fn empirical_density(curve: &WeierstrassCurve, j: u64, x: u64, max_x: u64) -> Result<EmpiricalDensity> {
    let table = empirical_table(curve, x, max_x)?;
    Ok(table.row(j))
}

/// Hit counts for every `j` that occurs, from one pass over the primes.
#[derive(Debug, Clone)]
pub struct EmpiricalTable {
    pub x: u64,
    pub good_count: u64,
    pub li_x: f64,
    pub hits: BTreeMap<u64, u64>,
}

impl EmpiricalTable {
    pub fn row(&self, j: u64) -> EmpiricalDensity {
        let hits = self.hits.get(&j).copied().unwrap_or(0);
        EmpiricalDensity {
            j,
            x: self.x,
            hits,
            good_count: self.good_count,
            li_x: self.li_x,
            ratio: hits as f64 / self.li_x,
        }
    }
}

pub fn empirical_table(curve: &WeierstrassCurve, x: u64, max_x: u64) -> Result<EmpiricalTable> {
    let structures = structures_up_to(curve, x, max_x)?;
    let mut hits = BTreeMap::new();
    for s in &structures {
        *hits.entry(s.d).or_insert(0) += 1;
    }
    Ok(EmpiricalTable {
        x,
        good_count: structures.len() as u64,
        li_x: li(x as f64)?,
        hits,
    })
}
