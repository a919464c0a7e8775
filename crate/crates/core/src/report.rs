//! Named pass/fail entries produced by the verification operations.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    /// Canonical rendering of the offending residual; `0` when passed.
    pub residual: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        residual: impl Into<String>,
        detail: impl Into<String>,
    ) {
        self.entries.push(CheckEntry {
            name: name.into(),
            passed,
            residual: residual.into(),
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, true, "0", detail);
    }

    pub fn fail(
        &mut self,
        name: impl Into<String>,
        residual: impl Into<String>,
        detail: impl Into<String>,
    ) {
        self.push(name, false, residual, detail);
    }

    /// Records a residual check: passes iff `residual` renders as `0`.
    pub fn residual(&mut self, name: impl Into<String>, residual: impl fmt::Display, detail: impl Into<String>) {
        let r = residual.to_string();
        self.push(name, r == "0", r, detail);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let verdict = if e.passed { "ok  " } else { "FAIL" };
            write!(f, "{verdict} {}", e.name)?;
            if !e.detail.is_empty() {
                write!(f, " ({})", e.detail)?;
            }
            if !e.passed {
                write!(f, ": {}", e.residual)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
