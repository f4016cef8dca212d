//! Report rows and their pass/fail rule.
//!
//! Every row carries a residual and a tolerance; the row passes iff
//! `|residual| <= tolerance`. How the residual is formed depends on the
//! [`Relation`] to the expected value.

use serde::{Deserialize, Serialize};

use qcalc_core::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A value stated in the source material.
    Paper,
    /// Obtained independently (closed form or a second computation).
    Derived,
    /// Follows immediately from definitions.
    Trivial,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Paper => "paper",
            Provenance::Derived => "derived",
            Provenance::Trivial => "trivial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum Relation {
    /// residual = computed - value
    Equal { value: f64 },
    /// residual = (computed - value) / |value|
    RelativeEqual { value: f64 },
    /// residual = max(0, computed - value)
    AtMost { value: f64 },
    /// residual = max(0, value - computed)
    AtLeast { value: f64 },
    /// residual = distance from computed to [lo, hi]
    Within { lo: f64, hi: f64 },
}

impl Relation {
    fn residual(self, computed: f64) -> f64 {
        match self {
            Relation::Equal { value } => computed - value,
            Relation::RelativeEqual { value } => (computed - value) / value.abs(),
            Relation::AtMost { value } => (computed - value).max(0.0),
            Relation::AtLeast { value } => (value - computed).max(0.0),
            Relation::Within { lo, hi } => (lo - computed).max(computed - hi).max(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(flatten)]
    pub relation: Relation,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub expected: Option<Expected>,
    pub computed: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Row {
    pub fn new(
        label: impl Into<String>,
        computed: f64,
        relation: Relation,
        provenance: Provenance,
        tolerance: f64,
    ) -> Self {
        let residual = relation.residual(computed);
        Self {
            label: label.into(),
            expected: Some(Expected { relation, provenance }),
            computed,
            residual,
            tolerance,
            // NaN residuals fail.
            pass: residual.abs() <= tolerance,
        }
    }

    pub fn equal(label: impl Into<String>, computed: f64, value: f64, provenance: Provenance, tolerance: f64) -> Self {
        Self::new(label, computed, Relation::Equal { value }, provenance, tolerance)
    }

    pub fn relative(
        label: impl Into<String>,
        computed: f64,
        value: f64,
        provenance: Provenance,
        tolerance: f64,
    ) -> Self {
        Self::new(
            label,
            computed,
            Relation::RelativeEqual { value },
            provenance,
            tolerance,
        )
    }

    pub fn at_most(
        label: impl Into<String>,
        computed: f64,
        value: f64,
        provenance: Provenance,
        tolerance: f64,
    ) -> Self {
        Self::new(label, computed, Relation::AtMost { value }, provenance, tolerance)
    }

    pub fn at_least(
        label: impl Into<String>,
        computed: f64,
        value: f64,
        provenance: Provenance,
        tolerance: f64,
    ) -> Self {
        Self::new(label, computed, Relation::AtLeast { value }, provenance, tolerance)
    }

    pub fn within(label: impl Into<String>, computed: f64, lo: f64, hi: f64, provenance: Provenance) -> Self {
        Self::new(label, computed, Relation::Within { lo, hi }, provenance, 0.0)
    }

    /// A boolean outcome recorded as 1 (true) or 0 (false).
    pub fn flag(label: impl Into<String>, holds: bool, expected: bool, provenance: Provenance) -> Self {
        let as_num = |b: bool| if b { 1.0 } else { 0.0 };
        Self::equal(label, as_num(holds), as_num(expected), provenance, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub kind: String,
    pub seed: u64,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: ScenarioEcho,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl Report {
    pub fn new(scenario: ScenarioEcho, rows: Vec<Row>) -> Self {
        let passed = rows.iter().filter(|r| r.pass).count();
        let summary = Summary {
            passed,
            failed: rows.len() - passed,
        };
        Self {
            scenario,
            rows,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn row(&self, label: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.label == label)
    }
}
