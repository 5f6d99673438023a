//! Sufficient (and one exact) criteria for positivity, each registered by
//! name so callers can pick strategies at runtime.

use std::fmt;

use serde::Serialize;

use crate::arith::{self, gcd, valuation};
use crate::error::{Error, Result};
use crate::glgroup::{serre_level, serre_subgroup, ResidueGroup, SubgroupClosure};

use super::{positivity, reduce_j, Positivity, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CriterionStatus {
    AppliesPositive,
    ProvesZero,
    Inconclusive,
    NotApplicable,
}

impl fmt::Display for CriterionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriterionStatus::AppliesPositive => "APPLIES_POSITIVE",
            CriterionStatus::ProvesZero => "PROVES_ZERO",
            CriterionStatus::Inconclusive => "INCONCLUSIVE",
            CriterionStatus::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionOutcome {
    pub criterion: String,
    pub status: CriterionStatus,
    pub detail: String,
}

/// Everything a criterion may consult.
pub struct CriterionContext<'a> {
    pub h: &'a SubgroupClosure,
    pub j: u64,
    pub serre_constant: Option<u64>,
    pub serre_delta_sf: Option<i64>,
    pub budget: usize,
}

pub trait PositivityCriterion: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn evaluate(&self, ctx: &CriterionContext<'_>) -> Result<CriterionOutcome>;
}

fn outcome(name: &str, status: CriterionStatus, detail: impl Into<String>) -> CriterionOutcome {
    CriterionOutcome {
        criterion: name.to_string(),
        status,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct T4bDiagnostics {
    pub j: u64,
    pub r: u64,
    pub a: u32,
    /// `det(H ∩ Γ_j) mod R` is all of `{u ≡ 1 mod j}`.
    pub cyclotomic_condition: bool,
    /// `|H mod 2j| ≠ |H mod j|`: the form used for the verdict.
    pub relative_two_condition: bool,
    /// `|H mod 2^{a+1}| ≠ |H mod 2^a|`.
    pub pure_two_condition: bool,
    pub readings_disagree: bool,
}

/// The cyclotomic-intersection criterion, tested through determinants of
/// `H ∩ Γ_j`. `j` must divide the modulus.
pub fn criterion_t4b(h: &SubgroupClosure, j: u64) -> Result<(CriterionStatus, T4bDiagnostics)> {
    let m = h.modulus() as u64;
    if j == 0 || !m.is_multiple_of(j) {
        return Err(Error::NotADivisor { divisor: j, modulus: m });
    }
    let odd: u64 = arith::prime_divisors(m / j).into_iter().filter(|&p| p != 2).product();
    let r = j * odd;
    let kernel = h.kernel_of_reduction(j)?;
    let dets = kernel.det_image(r)?;
    let target = ResidueGroup::congruent_to_one(j as u32, r as u32)?;
    let cyclotomic_condition = dets == target;
    let a = valuation(j, 2);
    let relative_two_condition = h.order_mod_extended(2 * j)? != h.order_mod_extended(j)?;
    let pure_two_condition = h.order_mod_extended(1 << (a + 1))? != h.order_mod_extended(1 << a)?;
    let status = if cyclotomic_condition && relative_two_condition {
        CriterionStatus::AppliesPositive
    } else {
        CriterionStatus::Inconclusive
    };
    Ok((
        status,
        T4bDiagnostics {
            j,
            r,
            a,
            cyclotomic_condition,
            relative_two_condition,
            pure_two_condition,
            readings_disagree: relative_two_condition != pure_two_condition,
        },
    ))
}

/// For odd `j | m`: nontrivial mod-2 image and `[H̄, H̄] = H̄ ∩ SL_2` where
/// `H̄ = H mod j`.
pub fn criterion_abelianisation(h: &SubgroupClosure, j: u64, budget: usize) -> Result<CriterionStatus> {
    if j.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("j = {j} must be odd")));
    }
    if h.order_mod_extended(2)? <= 1 {
        return Ok(CriterionStatus::Inconclusive);
    }
    let bar = h.reduce(j)?;
    let derived = bar.commutator_subgroup(budget)?;
    Ok(if derived == bar.intersect_sl2() {
        CriterionStatus::AppliesPositive
    } else {
        CriterionStatus::Inconclusive
    })
}

/// `gcd(j, 2 A(E)) = 1` with a nontrivial mod-2 image.
pub fn criterion_coprime(j: u64, serre_constant: Option<u64>, mod2_order: u64) -> Result<CriterionStatus> {
    let a = serre_constant.ok_or_else(|| Error::MissingData("Serre constant A(E)".into()))?;
    Ok(if gcd(j, 2 * a) == 1 && mod2_order > 1 {
        CriterionStatus::AppliesPositive
    } else {
        CriterionStatus::Inconclusive
    })
}

/// Positivity on the Serre subgroup attached to `delta_sf`. A zero verdict
/// would contradict the theory and is reported as an internal error.
pub fn serre_positivity(delta_sf: i64, j: u64, budget: usize) -> Result<Positivity> {
    let m = serre_level(delta_sf)?;
    let h = serre_subgroup(delta_sf, m, budget)?;
    let p = positivity(&h, j)?;
    if p.verdict != Verdict::Positive {
        return Err(Error::Internal(format!(
            "Serre subgroup for {delta_sf} has a zero at j = {j}"
        )));
    }
    Ok(p)
}

struct ExactCriterion;

impl PositivityCriterion for ExactCriterion {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn summary(&self) -> &'static str {
        "kernel covering test: decides positivity both ways"
    }

    fn evaluate(&self, ctx: &CriterionContext<'_>) -> Result<CriterionOutcome> {
        let p = positivity(ctx.h, ctx.j)?;
        let status = match p.verdict {
            Verdict::Positive => CriterionStatus::AppliesPositive,
            Verdict::Zero => CriterionStatus::ProvesZero,
        };
        Ok(outcome(self.name(), status, format!("decided at j = {}", p.j_reduced)))
    }
}

struct T4bCriterion;

impl PositivityCriterion for T4bCriterion {
    fn name(&self) -> &'static str {
        "t4b"
    }

    fn summary(&self) -> &'static str {
        "cyclotomic intersection plus a nontrivial 2-adic step"
    }

    fn evaluate(&self, ctx: &CriterionContext<'_>) -> Result<CriterionOutcome> {
        let jr = reduce_j(ctx.j, ctx.h.modulus() as u64);
        let (status, d) = criterion_t4b(ctx.h, jr)?;
        let mut detail = format!(
            "R = {}, a = {}, cyclotomic = {}, 2-step = {}",
            d.r, d.a, d.cyclotomic_condition, d.relative_two_condition
        );
        if d.readings_disagree {
            detail.push_str(&format!("; pure 2-power reading gives {}", d.pure_two_condition));
        }
        Ok(outcome(self.name(), status, detail))
    }
}

struct AbelianisationCriterion;

impl PositivityCriterion for AbelianisationCriterion {
    fn name(&self) -> &'static str {
        "abelianisation"
    }

    fn summary(&self) -> &'static str {
        "odd j whose mod-j image has derived subgroup equal to its SL2 part"
    }

    fn evaluate(&self, ctx: &CriterionContext<'_>) -> Result<CriterionOutcome> {
        let jr = reduce_j(ctx.j, ctx.h.modulus() as u64);
        if jr.is_multiple_of(2) {
            return Ok(outcome(self.name(), CriterionStatus::NotApplicable, "j is even"));
        }
        let status = criterion_abelianisation(ctx.h, jr, ctx.budget)?;
        Ok(outcome(self.name(), status, format!("checked at j = {jr}")))
    }
}

struct CoprimeCriterion;

impl PositivityCriterion for CoprimeCriterion {
    fn name(&self) -> &'static str {
        "coprime"
    }

    fn summary(&self) -> &'static str {
        "j coprime to 2A(E) with a nontrivial mod-2 image"
    }

    fn evaluate(&self, ctx: &CriterionContext<'_>) -> Result<CriterionOutcome> {
        let Some(a) = ctx.serre_constant else {
            return Ok(outcome(self.name(), CriterionStatus::NotApplicable, "A(E) unknown"));
        };
        let mod2 = ctx.h.order_mod_extended(2)? as u64;
        let status = criterion_coprime(ctx.j, Some(a), mod2)?;
        Ok(outcome(self.name(), status, format!("A(E) = {a}, |H mod 2| = {mod2}")))
    }
}

struct SerreCriterion;

impl PositivityCriterion for SerreCriterion {
    fn name(&self) -> &'static str {
        "serre"
    }

    fn summary(&self) -> &'static str {
        "Serre curves have no zeros"
    }

    fn evaluate(&self, ctx: &CriterionContext<'_>) -> Result<CriterionOutcome> {
        let Some(delta) = ctx.serre_delta_sf else {
            return Ok(outcome(
                self.name(),
                CriterionStatus::NotApplicable,
                "not a Serre curve",
            ));
        };
        let p = serre_positivity(delta, ctx.j, ctx.budget)?;
        Ok(outcome(
            self.name(),
            CriterionStatus::AppliesPositive,
            format!("discriminant {delta}, modulus {}", p.modulus),
        ))
    }
}

/// Named collection of criteria, evaluated in registration order.
pub struct CriterionRegistry {
    entries: Vec<Box<dyn PositivityCriterion>>,
}

impl CriterionRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(ExactCriterion));
        r.register(Box::new(T4bCriterion));
        r.register(Box::new(AbelianisationCriterion));
        r.register(Box::new(CoprimeCriterion));
        r.register(Box::new(SerreCriterion));
        r
    }

    /// Adds a criterion, replacing any existing one of the same name.
    pub fn register(&mut self, c: Box<dyn PositivityCriterion>) {
        self.entries.retain(|e| e.name() != c.name());
        self.entries.push(c);
    }

    pub fn get(&self, name: &str) -> Option<&dyn PositivityCriterion> {
        self.entries.iter().find(|e| e.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    /// Restrict to the named criteria, in the order given.
    pub fn select(mut self, names: &[String]) -> Result<Self> {
        let mut out = Self::empty();
        for n in names {
            let idx = self
                .entries
                .iter()
                .position(|e| e.name() == n)
                .ok_or_else(|| Error::InvalidInput(format!("unknown criterion {n}")))?;
            out.entries.push(self.entries.remove(idx));
        }
        Ok(out)
    }

    /// Evaluate every criterion; failures become `NotApplicable` outcomes
    /// carrying the error text.
    pub fn evaluate_all(&self, ctx: &CriterionContext<'_>) -> Vec<CriterionOutcome> {
        self.entries
            .iter()
            .map(|c| {
                c.evaluate(ctx)
                    .unwrap_or_else(|e| outcome(c.name(), CriterionStatus::NotApplicable, e.to_string()))
            })
            .collect()
    }
}
