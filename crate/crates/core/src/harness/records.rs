use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::prime_divisors;
use crate::coincidence::DivisionFieldFacts;
use crate::error::{Error, Result};
use crate::ffcurve::WeierstrassCurve;
use crate::glgroup::{serre_level, serre_subgroup, MatrixEntries, ModMatrix, SubgroupClosure};

pub const SCHEMA_VERSION: u32 = 1;

/// One curve with its Galois image data, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRecord {
    pub label: String,
    pub weierstrass: [i64; 5],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u64>,
    pub discriminant: i128,
    pub cm: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adelic_level: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub image_generators: Vec<MatrixEntries>,
    /// Marks a Serre curve; its image is rebuilt from this discriminant when
    /// no generators are given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub serre_delta_sf: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub serre_constant: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<DivisionFieldFacts>,
    /// Image data chosen to exhibit a phenomenon rather than taken from a
    /// database.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub synthetic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordFile {
    pub schema_version: u32,
    pub records: Vec<CurveRecord>,
}

impl RecordFile {
    pub fn new(records: Vec<CurveRecord>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            records,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RecordFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_canonical_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// A validated record. The image is closed on first use.
#[derive(Debug)]
pub struct LoadedRecord {
    pub record: CurveRecord,
    pub curve: WeierstrassCurve,
    budget: usize,
    image: OnceLock<std::result::Result<SubgroupClosure, Error>>,
}

impl LoadedRecord {
    pub fn label(&self) -> &str {
        &self.record.label
    }

    pub fn has_image(&self) -> bool {
        !self.record.image_generators.is_empty() || self.record.serre_delta_sf.is_some()
    }

    pub fn image(&self) -> Result<&SubgroupClosure> {
        if !self.has_image() {
            return Err(Error::MissingData(format!(
                "record {} carries no image generators",
                self.record.label
            )));
        }
        self.image
            .get_or_init(|| build_image(&self.record, self.budget))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn discriminant_sf(&self) -> Option<i128> {
        self.curve.discriminant_squarefree_part().ok()
    }
}

fn build_image(r: &CurveRecord, budget: usize) -> Result<SubgroupClosure> {
    if r.image_generators.is_empty() {
        let delta = r
            .serre_delta_sf
            .ok_or_else(|| Error::MissingData("no image data".into()))?;
        let m = r.adelic_level.map_or_else(|| serre_level(delta), Ok)?;
        return serre_subgroup(delta, m, budget);
    }
    let m = r
        .adelic_level
        .ok_or_else(|| Error::MissingData("generators without adelic_level".into()))?;
    let gens = r
        .image_generators
        .iter()
        .map(|g| g.to_matrix(m))
        .collect::<Result<Vec<ModMatrix>>>()?;
    SubgroupClosure::close(m, &gens, budget)
}

fn units_generated(dets: &[u64], m: u64) -> u64 {
    let mut seen = vec![false; m as usize];
    let mut frontier = vec![1 % m];
    seen[(1 % m) as usize] = true;
    let mut count = 1;
    while let Some(x) = frontier.pop() {
        for &d in dets {
            let y = x * d % m;
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                frontier.push(y);
            }
        }
    }
    count
}

/// Structural checks. Each failure names the violated clause.
pub fn validate(r: &CurveRecord) -> std::result::Result<WeierstrassCurve, Vec<String>> {
    let mut reasons = Vec::new();
    let curve = match WeierstrassCurve::from_i64(r.weierstrass) {
        Ok(c) => Some(c),
        Err(e) => {
            reasons.push(format!("model: {e}"));
            None
        }
    };
    if let Some(c) = &curve {
        let d = c.discriminant().to_string();
        if d != r.discriminant.to_string() {
            reasons.push(format!("discriminant: model gives {d}, record says {}", r.discriminant));
        }
    }
    if r.cm {
        reasons.push("cm: CM curves are outside scope".into());
    }
    if let Some(m) = r.adelic_level {
        if m == 0 {
            reasons.push("adelic_level: must be positive".into());
        }
    }
    if !r.image_generators.is_empty() {
        match r.adelic_level {
            None => reasons.push("image_generators: adelic_level missing".into()),
            Some(m) if m > 0 => {
                let mut dets = Vec::new();
                for (i, g) in r.image_generators.iter().enumerate() {
                    match g.to_matrix(m) {
                        Ok(x) if x.is_invertible() => dets.push(x.det() as u64),
                        Ok(x) => reasons.push(format!(
                            "image_generators[{i}]: determinant {} is not a unit mod {m}",
                            x.det()
                        )),
                        Err(e) => reasons.push(format!("image_generators[{i}]: {e}")),
                    }
                }
                if dets.len() == r.image_generators.len() {
                    let phi = crate::arith::euler_phi(m as u64);
                    let got = units_generated(&dets, m as u64);
                    if got != phi {
                        reasons.push(format!(
                            "det-surjective: determinants generate {got} of {phi} units mod {m}"
                        ));
                    }
                }
            }
            Some(_) => {}
        }
    }
    if let Some(delta) = r.serre_delta_sf {
        match serre_level(delta) {
            Ok(level) => {
                if let Some(m) = r.adelic_level {
                    if m != level {
                        reasons.push(format!("serre: level {m} differs from {level}"));
                    }
                }
            }
            Err(e) => reasons.push(format!("serre: {e}")),
        }
        if let Some(c) = &curve {
            if c.discriminant_squarefree_part().ok() != Some(delta as i128) {
                reasons.push("serre: serre_delta_sf is not the squarefree part of the discriminant".into());
            }
        }
    }
    if let (Some(m), Some(a)) = (r.adelic_level, r.serre_constant) {
        if a == 0 {
            reasons.push("serre_constant: must be positive".into());
        } else {
            for p in prime_divisors(a) {
                if !(m as u64).is_multiple_of(p) {
                    reasons.push(format!(
                        "serre-constant-primes-divide-level: {p} divides A(E) = {a} but not m = {m}"
                    ));
                }
            }
            if let Some(n) = r.conductor {
                let bound = 2u128 * n as u128 * a as u128;
                for p in prime_divisors(m as u64) {
                    if !bound.is_multiple_of(p as u128) {
                        reasons.push(format!(
                            "level-primes-divide-2NA: {p} divides m = {m} but not 2*N*A = {bound}"
                        ));
                    }
                }
            }
        }
    }
    if let Some(n) = r.conductor {
        if let Some(c) = &curve {
            let bad = prime_divisors(n).into_iter().any(|p| {
                let d = c.discriminant();
                !(d % num::BigInt::from(p) == num::BigInt::from(0))
            });
            if bad {
                reasons.push(format!(
                    "conductor: a prime of N = {n} does not divide the discriminant"
                ));
            }
        }
    }
    match curve {
        Some(c) if reasons.is_empty() => Ok(c),
        _ => Err(reasons),
    }
}

#[derive(Debug)]
pub struct Corpus {
    pub records: Vec<LoadedRecord>,
    pub failures: Vec<(String, Vec<String>)>,
}

impl Corpus {
    pub fn from_file(file: RecordFile, budget: usize) -> Self {
        let mut records = Vec::new();
        let mut failures = Vec::new();
        for r in file.records {
            match validate(&r) {
                Ok(curve) => records.push(LoadedRecord {
                    record: r,
                    curve,
                    budget,
                    image: OnceLock::new(),
                }),
                Err(reasons) => failures.push((r.label.clone(), reasons)),
            }
        }
        Self { records, failures }
    }

    pub fn load(path: &Path, budget: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_file(RecordFile::from_json(&text)?, budget))
    }

    pub fn get(&self, label: &str) -> Result<&LoadedRecord> {
        self.records
            .iter()
            .find(|r| r.label() == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn into_strict(self) -> Result<Vec<LoadedRecord>> {
        if self.failures.is_empty() {
            return Ok(self.records);
        }
        let label = self
            .failures
            .iter()
            .map(|f| f.0.as_str())
            .collect::<Vec<_>>()
            .join(", ");
        let reasons = self
            .failures
            .into_iter()
            .flat_map(|(l, rs)| rs.into_iter().map(move |r| format!("{l}: {r}")))
            .collect();
        Err(Error::Validation { label, reasons })
    }
}

/// Read and validate a record file; any invalid record fails the whole load
/// with every reason collected.
pub fn parse_records(path: &Path, budget: usize) -> Result<Vec<LoadedRecord>> {
    Corpus::load(path, budget)?.into_strict()
}

pub fn parse_records_str(text: &str, budget: usize) -> Result<Vec<LoadedRecord>> {
    Corpus::from_file(RecordFile::from_json(text)?, budget).into_strict()
}
