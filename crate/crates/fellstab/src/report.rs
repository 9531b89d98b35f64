//! Report types shared by validators and verification suites.

use serde::{Deserialize, Serialize};

/// One violated axiom, with a human-readable witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    /// Short machine-friendly code, e.g. "associativity".
    pub code: String,
    /// Witnessing data, e.g. the failing triple.
    pub witness: String,
}

/// Outcome of an axiom sweep: either "valid" or a list of violations.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport {
            violations: Vec::new(),
        }
    }

    pub fn push(&mut self, code: &str, witness: String) {
        self.violations.push(Violation {
            code: code.to_string(),
            witness,
        });
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn render_text(&self) -> String {
        if self.is_valid() {
            return "valid\n".to_string();
        }
        let mut out = String::new();
        for v in &self.violations {
            out.push_str(&format!("VIOLATION {}: {}\n", v.code, v.witness));
        }
        out.push_str(&format!("{} violation(s)\n", self.violations.len()));
        out
    }
}

/// One residual check from a numerical verification suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckLine {
    /// Identity being checked, e.g. "translation_multiplicative".
    pub check: String,
    /// Where, e.g. the arrow or arrow pair.
    pub location: String,
    /// Max residual observed over the spanning set.
    pub residual: f64,
    pub pass: bool,
}

/// A suite of residual checks against a fixed tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tolerance: f64,
    pub lines: Vec<CheckLine>,
}

impl VerificationReport {
    pub fn new(tolerance: f64) -> Self {
        VerificationReport {
            tolerance,
            lines: Vec::new(),
        }
    }

    pub fn record(&mut self, check: &str, location: String, residual: f64) {
        self.lines.push(CheckLine {
            check: check.to_string(),
            location,
            residual,
            pass: residual <= self.tolerance,
        });
    }

    pub fn ok(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.lines.iter().map(|l| l.residual).fold(0.0, f64::max)
    }

    /// Deterministic ordering for rendering: by check name, then location.
    pub fn sort(&mut self) {
        self.lines
            .sort_by(|a, b| (&a.check, &a.location).cmp(&(&b.check, &b.location)));
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&format!(
                "{} {} {} max_residual={:.3e}\n",
                if l.pass { "ok  " } else { "FAIL" },
                l.check,
                l.location,
                l.residual
            ));
        }
        out.push_str(&format!(
            "SUMMARY ok={} checks={} max_residual={:.3e} tolerance={:.1e}\n",
            self.ok(),
            self.lines.len(),
            self.max_residual(),
            self.tolerance
        ));
        out
    }
}
