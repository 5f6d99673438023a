use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trusted division-field facts attached to a curve record.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisionFieldFacts {
    /// Conductor of `Q(E[2])` when it is abelian (1 if trivial).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_division_abelian_conductor: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_division_is_q_i: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub four_division_abelian_conductor: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta8_in_four_division: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eight_division_abelian_conductor: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub three_division_is_q_zeta3: Option<bool>,
}

impl DivisionFieldFacts {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

pub struct PredictorInput<'a> {
    pub facts: &'a DivisionFieldFacts,
    pub discriminant_sf: Option<i128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedCoincidence {
    pub predictor: String,
    pub j: u64,
    pub p: u64,
}

pub trait CoincidencePredictor: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn predict(&self, input: &PredictorInput) -> Option<(u64, u64)>;
}

fn odd_part_of_conductor(c: Option<u64>, two_power: u64) -> Option<u64> {
    let c = c?;
    (c % two_power == 0 && (c / two_power) % 2 == 1).then_some(c / two_power)
}

struct AbelianTwoTorsion;
struct AbelianFourTorsion;
struct AbelianEightTorsion;
struct MinimalThreeTorsion;

impl CoincidencePredictor for AbelianTwoTorsion {
    fn name(&self) -> &'static str {
        "ab-two-torsion"
    }
    fn summary(&self) -> &'static str {
        "Q(E[2]) abelian of odd conductor m gives Q(E[m]) = Q(E[2m])"
    }
    fn predict(&self, input: &PredictorInput) -> Option<(u64, u64)> {
        let m = input.facts.two_division_abelian_conductor?;
        (m % 2 == 1).then_some((m, 2))
    }
}

impl CoincidencePredictor for AbelianFourTorsion {
    fn name(&self) -> &'static str {
        "ab-four-torsion"
    }
    fn summary(&self) -> &'static str {
        "Q(E[2]) = Q(i), Q(E[4]) abelian of conductor 4j, j odd: Q(E[2j]) = Q(E[4j])"
    }
    fn predict(&self, input: &PredictorInput) -> Option<(u64, u64)> {
        if input.facts.two_division_is_q_i != Some(true) {
            return None;
        }
        let j = odd_part_of_conductor(input.facts.four_division_abelian_conductor, 4)?;
        Some((2 * j, 2))
    }
}

impl CoincidencePredictor for AbelianEightTorsion {
    fn name(&self) -> &'static str {
        "ab-eight-torsion"
    }
    fn summary(&self) -> &'static str {
        "zeta8 in Q(E[4]), Q(E[8]) abelian of conductor 8j, j odd: Q(E[4j]) = Q(E[8j])"
    }
    fn predict(&self, input: &PredictorInput) -> Option<(u64, u64)> {
        if input.facts.zeta8_in_four_division != Some(true) {
            return None;
        }
        let j = odd_part_of_conductor(input.facts.eight_division_abelian_conductor, 8)?;
        Some((4 * j, 2))
    }
}

impl CoincidencePredictor for MinimalThreeTorsion {
    fn name(&self) -> &'static str {
        "min-three-torsion"
    }
    fn summary(&self) -> &'static str {
        "Q(E[3]) = Q(zeta3) and 3 | disc_sf: Q(E[m]) = Q(E[3m])"
    }
    fn predict(&self, input: &PredictorInput) -> Option<(u64, u64)> {
        if input.facts.three_division_is_q_zeta3 != Some(true) {
            return None;
        }
        let d = input.discriminant_sf?;
        if d % 3 != 0 {
            return None;
        }
        let a = d.unsigned_abs() as u64;
        let three_m = if d.rem_euclid(4) == 1 { 2 * a } else { 4 * a };
        Some((three_m / 3, 3))
    }
}

/// Name-keyed registry of coincidence predictors.
pub struct PredictorRegistry {
    predictors: BTreeMap<&'static str, Box<dyn CoincidencePredictor>>,
}

impl PredictorRegistry {
    pub fn empty() -> Self {
        Self {
            predictors: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(AbelianTwoTorsion));
        r.register(Box::new(AbelianFourTorsion));
        r.register(Box::new(AbelianEightTorsion));
        r.register(Box::new(MinimalThreeTorsion));
        r
    }

    pub fn register(&mut self, p: Box<dyn CoincidencePredictor>) {
        self.predictors.insert(p.name(), p);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CoincidencePredictor> {
        self.predictors
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.predictors.keys().copied().collect()
    }

    pub fn select(&self, names: &[String]) -> Result<Vec<&dyn CoincidencePredictor>> {
        if names.is_empty() {
            return Ok(self.predictors.values().map(|b| b.as_ref()).collect());
        }
        names.iter().map(|n| self.get(n)).collect()
    }

    pub fn predict_all(&self, input: &PredictorInput) -> Vec<PredictedCoincidence> {
        self.predictors
            .values()
            .filter_map(|p| {
                p.predict(input).map(|(j, q)| PredictedCoincidence {
                    predictor: p.name().to_string(),
                    j,
                    p: q,
                })
            })
            .collect()
    }
}

impl Default for PredictorRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

pub fn predict_coincidences(facts: &DivisionFieldFacts, discriminant_sf: Option<i128>) -> Vec<PredictedCoincidence> {
    PredictorRegistry::builtin().predict_all(&PredictorInput { facts, discriminant_sf })
}
