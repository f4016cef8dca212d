//! Outcome tables for randomized axiom checks.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomEntry {
    pub name: String,
    pub status: CheckStatus,
    /// Largest violation over all samples (0 when every sample satisfied it).
    pub worst_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct AxiomReport {
    pub title: String,
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    /// Record a check from its worst residual.
    pub fn record(&mut self, name: &str, worst: f64, tolerance: f64, samples: usize, note: &str) {
        let status = if worst <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.entries.push(AxiomEntry {
            name: name.to_string(),
            status,
            worst_residual: worst,
            tolerance,
            samples,
            note: note.to_string(),
        });
    }

    pub fn skip(&mut self, name: &str, note: &str) {
        self.entries.push(AxiomEntry {
            name: name.to_string(),
            status: CheckStatus::Skipped,
            worst_residual: 0.0,
            tolerance: 0.0,
            samples: 0,
            note: note.to_string(),
        });
    }

    pub fn entry(&self, name: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.entry(name).map(|e| e.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter().filter(|e| e.status == CheckStatus::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Column-wise maximum of per-sample residual rows.
pub(crate) fn worst_per_column(rows: &[Vec<f64>], width: usize) -> Vec<f64> {
    let mut worst = vec![0.0_f64; width];
    for row in rows {
        for (w, &r) in worst.iter_mut().zip(row) {
            // NaN counts as a violation.
            *w = if r.is_nan() { f64::INFINITY } else { w.max(r) };
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_and_query() {
        let mut r = AxiomReport::new("t");
        r.record("a", 1e-12, 1e-9, 10, "");
        r.record("b", 1.0, 1e-9, 10, "");
        r.skip("c", "out of scope");
        assert_eq!(r.status("a"), Some(CheckStatus::Pass));
        assert_eq!(r.status("b"), Some(CheckStatus::Fail));
        assert_eq!(r.status("c"), Some(CheckStatus::Skipped));
        assert!(!r.all_passed());
        assert_eq!(
            worst_per_column(&[vec![1.0, f64::NAN], vec![2.0, 0.0]], 2),
            vec![2.0, f64::INFINITY]
        );
    }
}
