//! Serializable run reports.

use std::fmt::Write as _;

use qlie_core::{CheckEntry, CheckReport, Status};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub outcome: Outcome,
    pub residual: f64,
    pub reconstruction: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<CheckEntry> for Entry {
    fn from(e: CheckEntry) -> Self {
        Entry {
            id: e.id,
            outcome: match e.status {
                Status::Pass => Outcome::Pass,
                Status::Fail => Outcome::Fail,
                Status::Skipped => Outcome::Skipped,
            },
            residual: e.residual,
            reconstruction: e.reconstruction,
            counterexample: e.counterexample,
            note: e.note,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub timing_us: u64,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn new(name: &str, rep: CheckReport, timing_us: u64) -> Self {
        Section { name: name.to_string(), timing_us, entries: rep.entries.into_iter().map(Entry::from).collect() }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.outcome != Outcome::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub source: String,
    pub name: String,
    pub n: usize,
    pub dim: usize,
    /// `exact` or `float`.
    pub arithmetic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub instance: InstanceMeta,
    pub command: String,
    pub max_len: usize,
    pub pairing_order: usize,
    pub strict_extended: bool,
    pub sections: Vec<Section>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl Report {
    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.sections.iter().flat_map(|s| s.entries.iter())
    }

    pub fn entry(&self, id: &str) -> Option<&Entry> {
        self.entries().find(|e| e.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries().filter(|e| e.outcome == Outcome::Fail)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let i = &self.instance;
        let mut s = String::new();
        let mode = match i.tolerance {
            Some(t) => format!("float tol={t:e}"),
            None => i.arithmetic.clone(),
        };
        let _ = writeln!(
            s,
            "qlie {}: {} (n={}, D={}, {mode}) max_len={} pairing_order={}",
            self.command, i.source, i.n, i.dim, self.max_len, self.pairing_order
        );
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        for sec in &self.sections {
            let _ = writeln!(s, "[{}] {} checks, {} us", sec.name, sec.entries.len(), sec.timing_us);
            for e in &sec.entries {
                let tag = match e.outcome {
                    Outcome::Pass => "PASS",
                    Outcome::Fail => "FAIL",
                    Outcome::Skipped => "SKIP",
                };
                let recon = if e.reconstruction { " [reconstructed]" } else { "" };
                let _ = writeln!(s, "  {tag} {}{recon} residual={}", e.id, e.residual);
                if let Some(c) = &e.counterexample {
                    let _ = writeln!(s, "       at {c}");
                }
                if let Some(n) = &e.note {
                    let _ = writeln!(s, "       {n}");
                }
            }
        }
        let _ = writeln!(s, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut rep = CheckReport::new();
        rep.push(CheckEntry::new("a", true, 0.0));
        rep.push(CheckEntry::new("b", false, 0.1 + 0.2).reconstructed().with_counterexample(Some("w".into())));
        rep.push(CheckEntry::skipped("c", "why"));
        Report {
            instance: InstanceMeta {
                source: "x.json".into(),
                name: "x".into(),
                n: 1,
                dim: 2,
                arithmetic: "float".into(),
                tolerance: Some(1e-9),
            },
            command: "all".into(),
            max_len: 2,
            pairing_order: 2,
            strict_extended: true,
            sections: vec![Section::new("validate", rep, 17)],
            warnings: vec!["w".into()],
            passed: false,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn reconstruction_failure_still_fails() {
        let r = sample();
        assert!(!r.sections[0].passed());
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.exit_code(), 2);
        assert!(r.to_text().contains("FAIL b [reconstructed]"));
    }
}
