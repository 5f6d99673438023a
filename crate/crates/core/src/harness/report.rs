use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::density::Certificate;
use crate::error::Result;

use super::commands::{CoincidenceReport, DensityReport, EmpiricalReport, PositivityReport, ScanReport};

/// A report with a human-readable table and a flat CSV form.
pub trait Report: Serialize {
    fn text(&self) -> String;
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;

    fn write_json(&self, path: &Path) -> Result<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        std::fs::write(path, s)?;
        Ok(())
    }

    fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(self.csv_header())?;
        for row in self.csv_rows() {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::Witness { element } => format!("witness {:?}", element.entries()),
        Certificate::Covering {
            kernel_order,
            coincidence_prime,
            ..
        } => match coincidence_prime {
            Some(p) => format!("covered ({kernel_order} elements), {p}-coincidence"),
            None => format!("covered ({kernel_order} elements)"),
        },
    }
}

fn list(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn footer(out: &mut String, budget: usize, truncation: u64, prime_bound: u64) {
    let _ = writeln!(
        out,
        "budget {budget}, truncation {truncation}, prime bound {prime_bound}"
    );
}

impl Report for DensityReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}  j = {}  (m = {}, decided at {})",
            self.label, self.j, self.modulus, self.j_reduced
        );
        let _ = writeln!(s, "  S            {{{}}}", list(&self.prime_set));
        let _ = writeln!(s, "  finite part  {}", self.finite_part);
        let _ = writeln!(
            s,
            "  euler        [{:.12}, {:.12}]",
            self.euler_interval.lo_f64, self.euler_interval.hi_f64
        );
        let _ = writeln!(
            s,
            "  C_E,j        [{:.12}, {:.12}]",
            self.value_interval.lo_f64, self.value_interval.hi_f64
        );
        let _ = writeln!(
            s,
            "  verdict      {}  ({})",
            self.verdict,
            certificate_text(&self.certificate)
        );
        if !self.coincidence_primes.is_empty() {
            let _ = writeln!(s, "  coincidences p = {}", list(&self.coincidence_primes));
        }
        for c in &self.criteria {
            let _ = writeln!(s, "  {:<15}{:<17}{}", c.criterion, c.status.to_string(), c.detail);
        }
        footer(
            &mut s,
            self.config.budget,
            self.config.truncation,
            self.config.prime_bound,
        );
        s
    }

    fn csv_header(&self) -> Vec<&'static str> {
        vec![
            "label",
            "j",
            "modulus",
            "verdict",
            "finite_part",
            "value_lo",
            "value_hi",
            "coincidence_primes",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.label.clone(),
            self.j.to_string(),
            self.modulus.to_string(),
            self.verdict.to_string(),
            self.finite_part.clone(),
            self.value_interval.lo_f64.to_string(),
            self.value_interval.hi_f64.to_string(),
            list(&self.coincidence_primes),
        ]]
    }
}

impl Report for PositivityReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}  (m = {})", self.label, self.modulus);
        let _ = writeln!(s, "  {:>6}  {:<9} certificate", "j", "verdict");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "  {:>6}  {:<9} {}",
                r.j,
                r.verdict.to_string(),
                certificate_text(&r.certificate)
            );
        }
        footer(
            &mut s,
            self.config.budget,
            self.config.truncation,
            self.config.prime_bound,
        );
        s
    }

    fn csv_header(&self) -> Vec<&'static str> {
        vec![
            "label",
            "j",
            "j_reduced",
            "verdict",
            "certificate",
            "coincidence_primes",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    self.label.clone(),
                    r.j.to_string(),
                    r.j_reduced.to_string(),
                    r.verdict.to_string(),
                    certificate_text(&r.certificate),
                    list(&r.coincidence_primes),
                ]
            })
            .collect()
    }
}

impl Report for CoincidenceReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "{}", e.label);
            match &e.detected {
                Some(cs) if cs.is_empty() => {
                    let _ = writeln!(s, "  detected     none with j <= {}", self.j_bound);
                }
                Some(cs) => {
                    for c in cs {
                        let kind = match c.induced_from {
                            None => "primitive".to_string(),
                            Some(d) => format!("from j = {d}"),
                        };
                        let _ = writeln!(s, "  detected     ({}, {})  {}", c.j, c.p, kind);
                    }
                }
                None => {}
            }
            for p in &e.predicted {
                let _ = writeln!(s, "  predicted    ({}, {})  {}", p.j, p.p, p.predictor);
            }
            for m in &e.mismatches {
                let _ = writeln!(s, "  DATA ERROR   {m}");
            }
            if let Some(n) = &e.note {
                let _ = writeln!(s, "  note         {n}");
            }
        }
        s
    }

    fn csv_header(&self) -> Vec<&'static str> {
        vec!["label", "kind", "j", "p", "detail"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for e in &self.entries {
            for c in e.detected.iter().flatten() {
                let detail = c.induced_from.map_or("primitive".to_string(), |d| format!("from {d}"));
                rows.push(vec![
                    e.label.clone(),
                    "detected".into(),
                    c.j.to_string(),
                    c.p.to_string(),
                    detail,
                ]);
            }
            for p in &e.predicted {
                rows.push(vec![
                    e.label.clone(),
                    "predicted".into(),
                    p.j.to_string(),
                    p.p.to_string(),
                    p.predictor.clone(),
                ]);
            }
            for m in &e.mismatches {
                rows.push(vec![
                    e.label.clone(),
                    "mismatch".into(),
                    String::new(),
                    String::new(),
                    m.clone(),
                ]);
            }
        }
        rows
    }
}

impl Report for EmpiricalReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}  x = {}  li(x) = {:.3}  good primes = {}",
            self.label, self.x, self.li_x, self.good_count
        );
        let _ = writeln!(s, "  {:>5} {:>8} {:>12}  density", "j", "hits", "hits/li");
        for r in &self.rows {
            let density = r
                .density
                .as_ref()
                .map_or("-".to_string(), |d| format!("[{:.6}, {:.6}]", d.lo_f64, d.hi_f64));
            let _ = writeln!(s, "  {:>5} {:>8} {:>12.6}  {}", r.j, r.hits, r.ratio, density);
        }
        let _ = writeln!(s, "good reduction: {}", self.good_reduction_policy);
        s
    }

    fn csv_header(&self) -> Vec<&'static str> {
        vec!["label", "x", "j", "hits", "ratio", "density_lo", "density_hi"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let (lo, hi) = r.density.as_ref().map_or((String::new(), String::new()), |d| {
                    (d.lo_f64.to_string(), d.hi_f64.to_string())
                });
                vec![
                    self.label.clone(),
                    self.x.to_string(),
                    r.j.to_string(),
                    r.hits.to_string(),
                    r.ratio.to_string(),
                    lo,
                    hi,
                ]
            })
            .collect()
    }
}

impl Report for ScanReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<18} {:>6} {:>13} {:>11} {:>10}",
            "label", "zeros", "coincidences", "unexplained", "p >= 5"
        );
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{:<18} {:>6} {:>13} {:>11} {:>10}",
                e.label,
                e.zeros.len(),
                e.coincidences.len(),
                e.unexplained_zeros.len(),
                e.large_prime_coincidences.len()
            );
        }
        for k in &self.skipped {
            let _ = writeln!(s, "{:<18} skipped: {}", k.label, k.reason);
        }
        let _ = writeln!(s, "counterexamples: {}", self.counterexamples);
        s
    }

    fn csv_header(&self) -> Vec<&'static str> {
        vec![
            "label",
            "zeros",
            "coincidences",
            "unexplained_zeros",
            "large_prime_coincidences",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|e| {
                vec![
                    e.label.clone(),
                    list(&e.zeros),
                    e.coincidences
                        .iter()
                        .map(|c| format!("({},{})", c.j, c.p))
                        .collect::<Vec<_>>()
                        .join(" "),
                    list(&e.unexplained_zeros),
                    e.large_prime_coincidences.len().to_string(),
                ]
            })
            .collect()
    }
}
