//! Acceptance checks for the holonomy library: randomized criteria against
//! independent oracles, plus fixed golden fixtures.

mod criteria;
pub mod golden;
pub mod oracles;

use std::fmt::Display;

pub use criteria::{run_all, run_criterion, CRITERION_COUNT};

pub const DEFAULT_SEED: u64 = 20_261_015;

const MAX_NOTES: usize = 5;

/// Worst error seen for one quantity, against its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    pub label: &'static str,
    pub tolerance: f64,
    pub worst: f64,
    pub samples: usize,
    pub failures: usize,
}

impl Measure {
    pub fn new(label: &'static str, tolerance: f64) -> Self {
        Self {
            label,
            tolerance,
            worst: 0.0,
            samples: 0,
            failures: 0,
        }
    }

    pub fn record(&mut self, err: f64) {
        self.samples += 1;
        if !(err < self.tolerance) {
            self.failures += 1;
        }
        self.worst = if err.is_nan() { f64::INFINITY } else { self.worst.max(err) };
    }

    pub fn passed(&self) -> bool {
        self.samples > 0 && self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    /// `criterion  7`, `golden`, ...
    pub label: String,
    pub title: String,
    pub measures: Vec<Measure>,
    /// Count of cases that errored or were rejected outright.
    pub error_count: usize,
    /// First few of those, for the report.
    pub notes: Vec<String>,
}

impl CriterionResult {
    pub fn new(id: u32, title: &str) -> Self {
        Self::labelled(format!("criterion {id:>2}"), title)
    }

    pub fn labelled(label: String, title: &str) -> Self {
        Self {
            label,
            title: title.to_string(),
            measures: Vec::new(),
            error_count: 0,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.error_count == 0 && !self.measures.is_empty() && self.measures.iter().all(Measure::passed)
    }

    pub fn with(mut self, m: Measure) -> Self {
        self.measures.push(m);
        self
    }

    pub fn fail(&mut self, note: String) {
        self.error_count += 1;
        if self.notes.len() < MAX_NOTES {
            self.notes.push(note);
        }
    }

    pub fn error(&mut self, e: impl Display) {
        self.fail(format!("error: {e}"));
    }

    pub fn take(&mut self, m: &mut Measure, r: holonomy::Result<f64>) {
        match r {
            Ok(e) => m.record(e),
            Err(e) => self.error(e),
        }
    }

    /// One summary line, `PASS`/`FAIL` first.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let measures: Vec<String> = self
            .measures
            .iter()
            .map(|m| {
                format!(
                    "{} {:.2e} (tol {:.0e}, {} cases{})",
                    m.label,
                    m.worst,
                    m.tolerance,
                    m.samples,
                    if m.failures > 0 { format!(", {} over", m.failures) } else { String::new() }
                )
            })
            .collect();
        let mut line = format!("{status}  {}  {}: {}", self.label, self.title, measures.join("; "));
        if self.error_count > 0 {
            line.push_str(&format!("; {} errored", self.error_count));
        }
        line
    }
}
