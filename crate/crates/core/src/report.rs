//! Check outcomes shared by the validator and the check suites.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not run; the entry still appears so every condition is accounted for.
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub id: String,
    pub status: Status,
    /// Max-abs over all residual components.
    pub residual: f64,
    /// The checked formula is a documented reading of damaged source text.
    pub reconstruction: bool,
    pub counterexample: Option<String>,
    pub note: Option<String>,
}

impl CheckEntry {
    pub fn new(id: impl Into<String>, passed: bool, residual: f64) -> Self {
        CheckEntry {
            id: id.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            residual,
            reconstruction: false,
            counterexample: None,
            note: None,
        }
    }

    pub fn skipped(id: impl Into<String>, note: impl Into<String>) -> Self {
        CheckEntry {
            id: id.into(),
            status: Status::Skipped,
            residual: 0.0,
            reconstruction: false,
            counterexample: None,
            note: Some(note.into()),
        }
    }

    pub fn reconstructed(mut self) -> Self {
        self.reconstruction = true;
        self
    }

    pub fn with_counterexample(mut self, c: Option<String>) -> Self {
        self.counterexample = c;
        self
    }

    pub fn with_note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Ordered list of check entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, e: CheckEntry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, o: CheckReport) {
        self.entries.extend(o.entries);
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(CheckEntry::passed)
    }

    pub fn get(&self, id: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Running max-abs residual with the first offending location.
#[derive(Debug, Clone, Default)]
pub(crate) struct Tally {
    pub residual: f64,
    pub failed: bool,
    pub first: Option<String>,
    pub count: usize,
}

impl Tally {
    pub fn record(&mut self, magnitude: f64, bad: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if magnitude > self.residual {
            self.residual = magnitude;
        }
        if bad {
            if !self.failed {
                self.first = Some(what());
            }
            self.failed = true;
        }
    }

    pub fn entry(self, id: &str) -> CheckEntry {
        CheckEntry::new(id, !self.failed, self.residual).with_counterexample(self.first)
    }
}
