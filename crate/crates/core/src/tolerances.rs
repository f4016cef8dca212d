use serde::{Deserialize, Serialize};

use crate::error::{QcalcError, Result};

/// Numeric thresholds shared by every predicate in the crate.
///
/// `herm_tol`, `psd_tol` and `commute_tol` are relative to operand norms;
/// `value_tol` is absolute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub herm_tol: f64,
    pub psd_tol: f64,
    pub commute_tol: f64,
    pub value_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm_tol: 1e-10,
            psd_tol: 1e-9,
            commute_tol: 1e-9,
            value_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.entries() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(QcalcError::InvalidParameter(format!(
                    "tolerance {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> [(&'static str, f64); 4] {
        [
            ("herm_tol", self.herm_tol),
            ("psd_tol", self.psd_tol),
            ("commute_tol", self.commute_tol),
            ("value_tol", self.value_tol),
        ]
    }

    /// Override a single entry by name, as used by `--tol key=val`.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "herm_tol" => &mut self.herm_tol,
            "psd_tol" => &mut self.psd_tol,
            "commute_tol" => &mut self.commute_tol,
            "value_tol" => &mut self.value_tol,
            other => return Err(QcalcError::InvalidParameter(format!("unknown tolerance key {other:?}"))),
        };
        *slot = value;
        self.validate()
    }
}
