//! Report rows and their CSV / JSON-lines encodings.

use std::io::Write;

use anyhow::Result;
use qlearn_core::learners::Quantiles;
use serde::Serialize;

/// One experiment summary. Column order is the field order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub class: String,
    pub size: Option<u64>,
    pub n: Option<u32>,
    pub gamma_hat: Option<String>,
    pub learner: String,
    pub trials: usize,
    pub success_rate: Option<f64>,
    pub quantum_min: Option<u64>,
    pub quantum_median: Option<u64>,
    pub quantum_max: Option<u64>,
    pub classical_min: Option<u64>,
    pub classical_median: Option<u64>,
    pub classical_max: Option<u64>,
    pub bound_name: String,
    pub bound: Option<u64>,
    /// `n·Q²·log₂log₂|C|` from the quantum median.
    pub nq2_loglog: Option<f64>,
    /// `R / (n·Q + Q²)` from the classical and quantum medians.
    pub r_over_nq_q2: Option<f64>,
    /// `name:pass` / `name:fail` entries separated by `;`.
    pub checks: String,
    pub pass: bool,
    pub note: String,
}

impl ReportRow {
    pub fn new(experiment: &str, class: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            class: class.to_string(),
            size: None,
            n: None,
            gamma_hat: None,
            learner: String::new(),
            trials: 0,
            success_rate: None,
            quantum_min: None,
            quantum_median: None,
            quantum_max: None,
            classical_min: None,
            classical_median: None,
            classical_max: None,
            bound_name: String::new(),
            bound: None,
            nq2_loglog: None,
            r_over_nq_q2: None,
            checks: String::new(),
            pass: true,
            note: String::new(),
        }
    }

    pub fn quantum(&mut self, q: Quantiles) {
        self.quantum_min = Some(q.min);
        self.quantum_median = Some(q.median);
        self.quantum_max = Some(q.max);
    }

    pub fn classical(&mut self, q: Quantiles) {
        self.classical_min = Some(q.min);
        self.classical_median = Some(q.median);
        self.classical_max = Some(q.max);
    }

    /// Records a named check and folds it into `pass`.
    pub fn check(&mut self, name: &str, ok: bool) {
        if !self.checks.is_empty() {
            self.checks.push(';');
        }
        self.checks.push_str(name);
        self.checks.push_str(if ok { ":pass" } else { ":fail" });
        self.pass &= ok;
    }

    pub fn note(&mut self, text: &str) {
        if !self.note.is_empty() {
            self.note.push_str("; ");
        }
        self.note.push_str(text);
    }

    /// Fills the two comparison columns when the needed medians are known.
    pub fn derive_ratios(&mut self) {
        let (Some(n), Some(size)) = (self.n, self.size) else { return };
        let n = f64::from(n);
        if let Some(q) = self.quantum_median {
            let q = q as f64;
            let loglog = (size as f64).log2().max(1.0).log2();
            self.nq2_loglog = Some(n * q * q * loglog);
            if let Some(r) = self.classical_median.filter(|_| q > 0.0) {
                self.r_over_nq_q2 = Some(r as f64 / (n * q + q * q));
            }
        }
    }
}

/// Closed form against explicit simulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaRow {
    pub formula_id: String,
    pub params: String,
    pub closed_form: f64,
    pub numeric: f64,
    pub abs_err: f64,
    pub pass: bool,
}

impl FormulaRow {
    pub fn new(formula_id: &str, params: String, closed_form: f64, numeric: f64, tolerance: f64) -> Self {
        let abs_err = (closed_form - numeric).abs();
        Self { formula_id: formula_id.to_string(), params, closed_form, numeric, abs_err, pass: abs_err <= tolerance }
    }
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json_lines<T: Serialize, W: Write>(rows: &[T], mut out: W) -> Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
