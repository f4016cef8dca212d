//! JSON interchange for quantities, ensembles and table experiments.
//!
//! Complex numbers are `[re, im]` pairs; a bare number is read as a real
//! value. Matrices are flattened row-major.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{Quantity, Realization};
use crate::ensembles::{gibbs_ensemble, Ensemble, EnsembleForm};
use crate::error::{QcalcError, Result};
use crate::experiments::{table_experiment, Experiment, RefValue};
use crate::tolerances::Tolerances;
use crate::C64;

/// One complex entry on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Pair([f64; 2]),
}

impl Entry {
    pub fn value(self) -> C64 {
        match self {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Pair([re, im]) => C64::new(re, im),
        }
    }
}

impl From<C64> for Entry {
    fn from(z: C64) -> Self {
        Entry::Pair([z.re, z.im])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantityJson {
    pub realization: Realization,
    pub dim: usize,
    pub data: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormTag {
    Weights,
    Pure,
    Density,
    Gibbs,
}

/// Ensemble on the wire. For `gibbs`, `data` is the (unnormalized) entropy
/// matrix and `kbar` is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleJson {
    pub form: FormTag,
    pub dim: usize,
    pub data: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kbar: Option<f64>,
}

/// A reference value or the `{"undefined": true}` marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RefValueJson {
    Defined(Entry),
    Undefined { undefined: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryJson {
    pub quantity: QuantityJson,
    pub value: RefValueJson,
}

fn decode_err(msg: impl Into<String>) -> QcalcError {
    QcalcError::Decode(msg.into())
}

fn expect_len(what: &str, data: &[Entry], len: usize) -> Result<Vec<C64>> {
    if data.len() != len {
        return Err(decode_err(format!(
            "{what}: expected {len} entries, found {}",
            data.len()
        )));
    }
    Ok(data.iter().map(|e| e.value()).collect())
}

fn square(what: &str, dim: usize, data: &[Entry]) -> Result<DMatrix<C64>> {
    let values = expect_len(what, data, dim * dim)?;
    Ok(DMatrix::from_row_slice(dim, dim, &values))
}

fn flatten(m: &DMatrix<C64>) -> Vec<Entry> {
    let n = m.nrows();
    (0..n * n).map(|k| m[(k / n, k % n)].into()).collect()
}

impl QuantityJson {
    pub fn decode(&self) -> Result<Quantity> {
        if self.dim == 0 {
            return Err(decode_err("quantity: dim must be positive"));
        }
        match self.realization {
            Realization::Classical => Quantity::classical(expect_len("classical quantity", &self.data, self.dim)?),
            Realization::Matrix => Quantity::matrix(square("matrix quantity", self.dim, &self.data)?),
        }
    }

    pub fn encode(q: &Quantity) -> Self {
        Self {
            realization: q.realization(),
            dim: q.dim(),
            data: q.flat_entries().into_iter().map(Entry::from).collect(),
        }
    }
}

impl EnsembleJson {
    pub fn decode(&self, tol: &Tolerances) -> Result<Ensemble> {
        if self.dim == 0 {
            return Err(decode_err("ensemble: dim must be positive"));
        }
        let n = self.dim;
        match self.form {
            FormTag::Weights => {
                let values = expect_len("weights", &self.data, n)?;
                if values.iter().any(|z| z.im != 0.0) {
                    return Err(decode_err("weights must be real"));
                }
                Ensemble::new(
                    EnsembleForm::Weights(DVector::from_iterator(n, values.iter().map(|z| z.re))),
                    *tol,
                )
            }
            FormTag::Pure => Ensemble::new(
                EnsembleForm::Pure(DVector::from_vec(expect_len("pure state", &self.data, n)?)),
                *tol,
            ),
            FormTag::Density => Ensemble::new(EnsembleForm::Density(square("density", n, &self.data)?), *tol),
            FormTag::Gibbs => {
                let kbar = self.kbar.ok_or_else(|| decode_err("gibbs ensemble needs kbar"))?;
                let entropy = Quantity::matrix(square("entropy", n, &self.data)?)?;
                gibbs_ensemble(&entropy, kbar, tol)
            }
        }
    }

    pub fn encode(e: &Ensemble) -> Self {
        let (form, data, kbar) = match e.form() {
            EnsembleForm::Weights(p) => (FormTag::Weights, p.iter().map(|&x| Entry::Real(x)).collect(), None),
            EnsembleForm::Pure(psi) => (FormTag::Pure, psi.iter().map(|&z| z.into()).collect(), None),
            EnsembleForm::Density(rho) => (FormTag::Density, flatten(rho), None),
            EnsembleForm::Gibbs { entropy, kbar, .. } => (FormTag::Gibbs, flatten(entropy), Some(*kbar)),
        };
        Self {
            form,
            dim: e.dim(),
            data,
            kbar,
        }
    }
}

impl RefValueJson {
    pub fn decode(&self) -> Result<RefValue> {
        match *self {
            RefValueJson::Defined(e) => Ok(RefValue::Defined(e.value())),
            RefValueJson::Undefined { undefined: true } => Ok(RefValue::Undefined),
            RefValueJson::Undefined { undefined: false } => {
                Err(decode_err("reference value marker must be {\"undefined\": true}"))
            }
        }
    }

    pub fn encode(v: RefValue) -> Self {
        match v {
            RefValue::Defined(z) => RefValueJson::Defined(z.into()),
            RefValue::Undefined => RefValueJson::Undefined { undefined: true },
        }
    }
}

pub fn decode_table(entries: &[TableEntryJson]) -> Result<Experiment> {
    let decoded = entries
        .iter()
        .map(|e| Ok((e.quantity.decode()?, e.value.decode()?)))
        .collect::<Result<Vec<_>>>()?;
    if let Some((first, _)) = decoded.first() {
        for (q, _) in &decoded[1..] {
            first.check_compatible(q)?;
        }
    }
    Ok(table_experiment(decoded))
}

pub fn quantity_from_json(text: &str) -> Result<Quantity> {
    serde_json::from_str::<QuantityJson>(text)
        .map_err(|e| decode_err(e.to_string()))?
        .decode()
}

pub fn quantity_to_json(q: &Quantity) -> String {
    serde_json::to_string(&QuantityJson::encode(q)).expect("plain data serializes")
}

pub fn ensemble_from_json(text: &str, tol: &Tolerances) -> Result<Ensemble> {
    serde_json::from_str::<EnsembleJson>(text)
        .map_err(|e| decode_err(e.to_string()))?
        .decode(tol)
}

pub fn ensemble_to_json(e: &Ensemble) -> String {
    serde_json::to_string(&EnsembleJson::encode(e)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;

    #[test]
    fn quantity_round_trip() {
        let s2 = pauli(2).unwrap();
        let text = quantity_to_json(&s2);
        assert_eq!(
            text,
            r#"{"realization":"matrix","dim":2,"data":[[0.0,0.0],[-0.0,-1.0],[0.0,1.0],[0.0,0.0]]}"#
        );
        assert_eq!(quantity_from_json(&text).unwrap(), s2);
        let c = quantity_from_json(r#"{"realization":"classical","dim":3,"data":[1,[0,2],-3.5]}"#).unwrap();
        assert_eq!(c.diagonal_entries()[1], C64::new(0.0, 2.0));
    }

    #[test]
    fn quantity_rejects_bad_shapes() {
        assert!(matches!(
            quantity_from_json(r#"{"realization":"matrix","dim":2,"data":[1,2,3]}"#),
            Err(QcalcError::Decode(_))
        ));
        assert!(quantity_from_json(r#"{"realization":"matrix","dim":1,"data":[1],"extra":0}"#).is_err());
        assert!(quantity_from_json("[").is_err());
    }

    #[test]
    fn ensemble_round_trip() {
        let tol = Tolerances::default();
        let cases = [
            r#"{"form":"weights","dim":2,"data":[0.25,0.75]}"#,
            r#"{"form":"pure","dim":2,"data":[[0.6,0.0],[0.0,0.8]]}"#,
            r#"{"form":"density","dim":2,"data":[0.5,0,0,0.5]}"#,
            r#"{"form":"gibbs","dim":2,"data":[1,0,0,-1],"kbar":2.0}"#,
        ];
        for text in cases {
            let e = ensemble_from_json(text, &tol).unwrap();
            let again = ensemble_from_json(&ensemble_to_json(&e), &tol).unwrap();
            let d = &again.density_matrix() - e.density_matrix();
            assert!(d.iter().all(|z| z.norm() < 1e-15), "{text}");
        }
        assert!(ensemble_from_json(r#"{"form":"gibbs","dim":1,"data":[0]}"#, &tol).is_err());
        assert!(matches!(
            ensemble_from_json(r#"{"form":"weights","dim":2,"data":[0.7,0.7]}"#, &tol),
            Err(QcalcError::InvalidEnsemble(_))
        ));
    }

    #[test]
    fn table_with_gaps() {
        let json = r#"[
            {"quantity":{"realization":"classical","dim":2,"data":[1,0]},"value":1},
            {"quantity":{"realization":"classical","dim":2,"data":[0,1]},"value":{"undefined":true}}
        ]"#;
        let entries: Vec<TableEntryJson> = serde_json::from_str(json).unwrap();
        let Experiment::Table { entries: decoded } = decode_table(&entries).unwrap() else {
            panic!("table expected");
        };
        assert_eq!(decoded[0].1, RefValue::Defined(C64::new(1.0, 0.0)));
        assert_eq!(decoded[1].1, RefValue::Undefined);
        assert_eq!(
            serde_json::to_string(&RefValueJson::encode(RefValue::Undefined)).unwrap(),
            r#"{"undefined":true}"#
        );
        let bad: RefValueJson = serde_json::from_str(r#"{"undefined":false}"#).unwrap();
        assert!(bad.decode().is_err());
    }
}
