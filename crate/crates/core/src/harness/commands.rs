use rayon::prelude::*;
use serde::Serialize;

use crate::arith::prime_divisors;
use crate::coincidence::{
    all_coincidences, is_p_coincidence, scan_image, Coincidence, PredictedCoincidence, PredictorInput,
    PredictorRegistry, ScanEntry,
};
use crate::density::{
    cej, positivity, Certificate, CriterionContext, CriterionOutcome, CriterionRegistry, Verdict, DEFAULT_TRUNCATION,
};
use crate::error::{Error, Result};
use crate::ffcurve::{empirical_table, DEFAULT_PRIME_BOUND};
use crate::glgroup::budget_from_env;
use crate::interval::{rational_string, IntervalSummary};

use super::records::LoadedRecord;

pub const GOOD_REDUCTION_POLICY: &str = "p > 3 and p does not divide the model discriminant";

/// Budgets and strategy selections shared by every command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub budget: usize,
    pub truncation: u64,
    pub prime_bound: u64,
    /// Criterion names; empty means all registered.
    pub criteria: Vec<String>,
    /// Predictor names; empty means all registered.
    pub predictors: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            budget: budget_from_env(),
            truncation: DEFAULT_TRUNCATION,
            prime_bound: DEFAULT_PRIME_BOUND,
            criteria: Vec::new(),
            predictors: Vec::new(),
        }
    }
}

impl RunConfig {
    fn criteria(&self) -> Result<CriterionRegistry> {
        let r = CriterionRegistry::builtin();
        if self.criteria.is_empty() {
            Ok(r)
        } else {
            r.select(&self.criteria)
        }
    }

    fn predict(&self, rec: &LoadedRecord) -> Result<Vec<PredictedCoincidence>> {
        let Some(facts) = &rec.record.metadata else {
            return Ok(Vec::new());
        };
        let registry = PredictorRegistry::builtin();
        let input = PredictorInput {
            facts,
            discriminant_sf: rec.discriminant_sf(),
        };
        Ok(registry
            .select(&self.predictors)?
            .into_iter()
            .filter_map(|p| {
                p.predict(&input).map(|(j, q)| PredictedCoincidence {
                    predictor: p.name().to_string(),
                    j,
                    p: q,
                })
            })
            .collect())
    }
}

fn coincidence_primes(rec: &LoadedRecord, j: u64) -> Result<Vec<u64>> {
    let h = rec.image()?;
    let mut out = Vec::new();
    for p in prime_divisors(h.modulus() as u64) {
        if is_p_coincidence(h, j, p)? {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub label: String,
    pub j: u64,
    pub modulus: u64,
    pub j_reduced: u64,
    pub prime_set: Vec<u64>,
    pub finite_part: String,
    pub euler_interval: IntervalSummary,
    pub value_interval: IntervalSummary,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub coincidence_primes: Vec<u64>,
    pub criteria: Vec<CriterionOutcome>,
    pub config: RunConfig,
}

pub fn cmd_density(rec: &LoadedRecord, j: u64, cfg: &RunConfig) -> Result<DensityReport> {
    let h = rec.image()?;
    let d = cej(h, j, cfg.truncation)?;
    let ctx = CriterionContext {
        h,
        j,
        serre_constant: rec.record.serre_constant,
        serre_delta_sf: rec.record.serre_delta_sf,
        budget: cfg.budget,
    };
    let criteria = cfg.criteria()?.evaluate_all(&ctx);
    Ok(DensityReport {
        label: rec.label().to_string(),
        j,
        modulus: d.modulus,
        j_reduced: d.positivity.j_reduced,
        prime_set: d.prime_set.primes.clone(),
        finite_part: rational_string(&d.finite_part),
        euler_interval: (&d.euler_interval).into(),
        value_interval: (&d.value_interval).into(),
        verdict: d.verdict,
        certificate: d.positivity.certificate.clone(),
        coincidence_primes: coincidence_primes(rec, j)?,
        criteria,
        config: cfg.clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityRow {
    pub j: u64,
    pub j_reduced: u64,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub coincidence_primes: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub label: String,
    pub modulus: u64,
    pub rows: Vec<PositivityRow>,
    pub config: RunConfig,
}

pub fn cmd_positivity(rec: &LoadedRecord, js: &[u64], cfg: &RunConfig) -> Result<PositivityReport> {
    let h = rec.image()?;
    let mut rows = Vec::with_capacity(js.len());
    for &j in js {
        let p = positivity(h, j)?;
        rows.push(PositivityRow {
            j,
            j_reduced: p.j_reduced,
            verdict: p.verdict,
            certificate: p.certificate,
            coincidence_primes: coincidence_primes(rec, j)?,
        });
    }
    Ok(PositivityReport {
        label: rec.label().to_string(),
        modulus: h.modulus() as u64,
        rows,
        config: cfg.clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoincidenceEntry {
    pub label: String,
    pub detected: Option<Vec<Coincidence>>,
    pub predicted: Vec<PredictedCoincidence>,
    /// Predictions the image data contradicts.
    pub mismatches: Vec<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoincidenceReport {
    pub j_bound: u64,
    pub entries: Vec<CoincidenceEntry>,
    pub config: RunConfig,
}

impl CoincidenceReport {
    pub fn mismatch_count(&self) -> usize {
        self.entries.iter().map(|e| e.mismatches.len()).sum()
    }
}

fn coincidence_entry(rec: &LoadedRecord, j_bound: u64, cfg: &RunConfig) -> Result<CoincidenceEntry> {
    let predicted = cfg.predict(rec)?;
    let mut entry = CoincidenceEntry {
        label: rec.label().to_string(),
        detected: None,
        predicted,
        mismatches: Vec::new(),
        note: None,
    };
    if !rec.has_image() {
        entry.note = Some("no image data; predictions not cross-checked".into());
        return Ok(entry);
    }
    let h = rec.image()?;
    entry.detected = Some(all_coincidences(h, j_bound, "image")?);
    for c in &entry.predicted {
        if !is_p_coincidence(h, c.j, c.p)? {
            entry.mismatches.push(format!(
                "{} predicts ({}, {}) but the image has no such coincidence",
                c.predictor, c.j, c.p
            ));
        }
    }
    Ok(entry)
}

pub fn cmd_coincidences(records: &[LoadedRecord], j_bound: u64, cfg: &RunConfig) -> Result<CoincidenceReport> {
    let entries = records
        .par_iter()
        .map(|r| coincidence_entry(r, j_bound, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoincidenceReport {
        j_bound,
        entries,
        config: cfg.clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalRow {
    pub j: u64,
    pub hits: u64,
    pub ratio: f64,
    pub density: Option<IntervalSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalReport {
    pub label: String,
    pub x: u64,
    pub li_x: f64,
    pub good_count: u64,
    pub good_reduction_policy: &'static str,
    pub rows: Vec<EmpiricalRow>,
    pub config: RunConfig,
}

/// Empirical counts for the requested `j` (every observed `j` if empty),
/// with the computed density interval alongside when image data exists.
pub fn cmd_empirical(rec: &LoadedRecord, js: &[u64], x: u64, cfg: &RunConfig) -> Result<EmpiricalReport> {
    let table = empirical_table(&rec.curve, x, cfg.prime_bound)?;
    let js: Vec<u64> = if js.is_empty() {
        table.hits.keys().copied().collect()
    } else {
        js.to_vec()
    };
    let mut rows = Vec::with_capacity(js.len());
    for j in js {
        let row = table.row(j);
        let density = match rec.image() {
            Ok(h) => Some((&cej(h, j, cfg.truncation)?.value_interval).into()),
            Err(Error::MissingData(_)) => None,
            Err(e) => return Err(e),
        };
        rows.push(EmpiricalRow {
            j,
            hits: row.hits,
            ratio: row.ratio,
            density,
        });
    }
    Ok(EmpiricalReport {
        label: rec.label().to_string(),
        x,
        li_x: table.li_x,
        good_count: table.good_count,
        good_reduction_policy: GOOD_REDUCTION_POLICY,
        rows,
        config: cfg.clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedRecord {
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub j_bound: u64,
    pub entries: Vec<ScanEntry>,
    pub skipped: Vec<SkippedRecord>,
    pub counterexamples: usize,
    pub config: RunConfig,
}

/// Zero/coincidence scan over every record that carries image data.
pub fn cmd_scan(records: &[LoadedRecord], j_bound: u64, cfg: &RunConfig) -> Result<ScanReport> {
    let results: Vec<std::result::Result<ScanEntry, SkippedRecord>> = records
        .par_iter()
        .map(|r| {
            let skip = |reason: String| SkippedRecord {
                label: r.label().to_string(),
                reason,
            };
            let h = r.image().map_err(|e| skip(e.to_string()))?;
            scan_image(r.label(), h, j_bound).map_err(|e| skip(e.to_string()))
        })
        .collect();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(e) => entries.push(e),
            Err(s) => skipped.push(s),
        }
    }
    let counterexamples = entries.iter().filter(|e| e.has_counterexample()).count();
    Ok(ScanReport {
        j_bound,
        entries,
        skipped,
        counterexamples,
        config: cfg.clone(),
    })
}

/// Process exit status for a failed command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation { .. } => 2,
        Error::BudgetExceeded { .. } => 3,
        _ => 1,
    }
}

/// Exit status when a scan finds a counterexample.
pub const EXIT_COUNTEREXAMPLE: i32 = 4;
