use std::fmt;

use serde::{Deserialize, Serialize};

/// Violations kept verbatim in a report; the rest are only counted.
pub const MAX_LISTED_VIOLATIONS: usize = 32;

/// Outcome of a verifier: how many checks ran, the worst numeric deviation,
/// and the first few violations found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: u64,
    pub max_abs_error: f64,
    pub violation_count: u64,
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), checks: 0, max_abs_error: 0.0, violation_count: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// Records one check with its absolute error against `tolerance`.
    pub fn check_close(&mut self, error: f64, tolerance: f64, describe: impl FnOnce() -> String) {
        self.checks += 1;
        let error = if error.is_nan() { f64::INFINITY } else { error };
        if error > self.max_abs_error {
            self.max_abs_error = error;
        }
        if error > tolerance {
            self.violation(describe());
        }
    }

    /// Records one pass/fail check.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violation(describe());
        }
    }

    fn violation(&mut self, message: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED_VIOLATIONS {
            self.violations.push(message);
        }
    }

    /// Folds `other` into `self`. Merging shards in a fixed order gives the
    /// same report regardless of how the work was scheduled.
    pub fn merge(&mut self, other: VerificationReport) {
        self.checks += other.checks;
        self.max_abs_error = self.max_abs_error.max(other.max_abs_error);
        self.violation_count += other.violation_count;
        let room = MAX_LISTED_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
    }

    pub(crate) fn merged(name: impl Into<String>, parts: impl IntoIterator<Item = VerificationReport>) -> Self {
        let mut report = Self::new(name);
        for part in parts {
            report.merge(part);
        }
        report
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} checks, max error {:.3e}, {} violations",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checks,
            self.max_abs_error,
            self.violation_count
        )
    }
}
