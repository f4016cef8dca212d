//! Sharpness of a set of Hermitian quantities in an experiment.

use serde::Serialize;

use super::{Experiment, RefValue};
use crate::algebra::{linalg, Quantity};
use crate::error::{QcalcError, Result};
use crate::nonlocality::BellQuadruple;
use crate::report::CheckStatus;
use crate::tolerances::Tolerances;
use crate::C64;

/// Inverses are only checked below this condition number.
const MAX_CONDITION: f64 = 1e8;

/// Coefficients used for the affine rule `v(a + b f) = a + b v(f)`.
const AFFINE: (f64, f64) = (0.5, -2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SharpRule {
    /// Values are real.
    Sq0,
    /// `v(f^2) = v(f)^2`
    Sq1,
    /// `v(f^-1) = v(f)^-1` for invertible `f`.
    Sq2,
    /// `v(f + g) = v(f) + v(g)` for commuting `f, g`.
    Sq3,
    /// `v(fg) = v(f) v(g)` for commuting `f, g`.
    Product,
    /// `v(a + b f) = a + b v(f)`
    Affine,
}

impl SharpRule {
    pub const ALL: [SharpRule; 6] = [
        SharpRule::Sq0,
        SharpRule::Sq1,
        SharpRule::Sq2,
        SharpRule::Sq3,
        SharpRule::Product,
        SharpRule::Affine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SharpRule::Sq0 => "SQ0",
            SharpRule::Sq1 => "SQ1",
            SharpRule::Sq2 => "SQ2",
            SharpRule::Sq3 => "SQ3",
            SharpRule::Product => "product",
            SharpRule::Affine => "affine",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleOutcome {
    pub rule: SharpRule,
    pub status: CheckStatus,
    /// Raw residual of the worst offender (relative to its own tolerance).
    pub worst_residual: f64,
    /// Set indices of the worst offender; always present on failure.
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpSetReport {
    pub rules: Vec<RuleOutcome>,
}

impl SharpSetReport {
    pub fn is_sharp(&self) -> bool {
        self.rules.iter().all(|r| r.status != CheckStatus::Fail)
    }

    pub fn rule(&self, rule: SharpRule) -> &RuleOutcome {
        self.rules
            .iter()
            .find(|r| r.rule == rule)
            .expect("every rule is reported")
    }
}

/// Tracks the worst `residual / tolerance` ratio for one rule.
struct Tally {
    rule: SharpRule,
    worst_ratio: f64,
    worst_residual: f64,
    witness: Option<(usize, usize)>,
    checked: bool,
}

impl Tally {
    fn new(rule: SharpRule) -> Self {
        Self {
            rule,
            worst_ratio: f64::NEG_INFINITY,
            worst_residual: 0.0,
            witness: None,
            checked: false,
        }
    }

    fn push(&mut self, residual: f64, tolerance: f64, witness: (usize, usize)) {
        self.checked = true;
        let ratio = if residual.is_finite() {
            residual / tolerance
        } else {
            f64::INFINITY
        };
        if ratio > self.worst_ratio {
            self.worst_ratio = ratio;
            self.worst_residual = residual;
            self.witness = Some(witness);
        }
    }

    fn finish(self) -> RuleOutcome {
        let status = if !self.checked {
            CheckStatus::Skipped
        } else if self.worst_ratio <= 1.0 {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        RuleOutcome {
            rule: self.rule,
            status,
            worst_residual: self.worst_residual,
            witness: if status == CheckStatus::Fail {
                self.witness
            } else {
                None
            },
        }
    }
}

fn gap(v: RefValue, expected: C64) -> f64 {
    match v {
        RefValue::Defined(z) => (z - expected).norm(),
        RefValue::Undefined => f64::INFINITY,
    }
}

/// Inverse of a Hermitian quantity when its condition number is acceptable.
fn well_conditioned_inverse(f: &Quantity) -> Option<Quantity> {
    let eig = f.hermitian_eigenvalues();
    let largest = eig.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let smallest = eig.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if smallest == 0.0 || largest / smallest > MAX_CONDITION {
        return None;
    }
    Some(match f {
        Quantity::Classical(v) => Quantity::Classical(v.map(|z| C64::new(1.0 / z.re, 0.0))),
        Quantity::Matrix(m) => Quantity::Matrix(linalg::hermitian_function(m, |l| C64::new(1.0 / l, 0.0))),
    })
}

/// Check the sharpness rules on `set`. Every member must have a defined value.
pub fn check_sharp_set(v: &Experiment, set: &[Quantity], tol: &Tolerances) -> Result<SharpSetReport> {
    let mut values = Vec::with_capacity(set.len());
    for (i, f) in set.iter().enumerate() {
        f.require_hermitian(tol)?;
        values.push(v.require(f, i, tol)?);
    }
    let mut tallies: Vec<Tally> = SharpRule::ALL.iter().map(|&r| Tally::new(r)).collect();
    let (a, b) = AFFINE;
    for (i, f) in set.iter().enumerate() {
        let vf = values[i];
        let nf = f.spectral_norm();
        tallies[0].push(vf.im.abs(), tol.value_tol * (1.0 + nf), (i, i));
        tallies[1].push(
            gap(v.evaluate(&f.square(), tol)?, vf * vf),
            tol.value_tol * (1.0 + nf * nf),
            (i, i),
        );
        if let Some(inv) = well_conditioned_inverse(f) {
            let expected = if vf.norm() > 0.0 {
                vf.inv()
            } else {
                C64::new(f64::INFINITY, 0.0)
            };
            tallies[2].push(
                gap(v.evaluate(&inv, tol)?, expected),
                tol.value_tol * (1.0 + inv.spectral_norm()),
                (i, i),
            );
        }
        let affine = f.scale_real(b).shift(C64::new(a, 0.0));
        tallies[5].push(
            gap(v.evaluate(&affine, tol)?, vf * b + a),
            tol.value_tol * (1.0 + b.abs() * nf),
            (i, i),
        );
    }
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            let (f, g) = (&set[i], &set[j]);
            if !f.commutes_with(g, tol)? {
                continue;
            }
            let (nf, ng) = (f.spectral_norm(), g.spectral_norm());
            tallies[3].push(
                gap(v.evaluate(&f.add(g)?, tol)?, values[i] + values[j]),
                tol.value_tol * (1.0 + nf + ng),
                (i, j),
            );
            tallies[4].push(
                gap(v.evaluate(&f.mul(g)?, tol)?, values[i] * values[j]),
                tol.value_tol * (1.0 + nf * ng),
                (i, j),
            );
        }
    }
    Ok(SharpSetReport {
        rules: tallies.into_iter().map(Tally::finish).collect(),
    })
}

/// Distance from `v(f)` to the spectrum of Hermitian `f`.
pub fn spectrum_membership(v: &Experiment, f: &Quantity, tol: &Tolerances) -> Result<f64> {
    f.require_hermitian(tol)?;
    let value = v.require(f, 0, tol)?;
    Ok(f.hermitian_eigenvalues()
        .iter()
        .map(|&mu| (value - mu).norm())
        .fold(f64::INFINITY, f64::min))
}

/// `|v(f1 f2) + v(f2 f3) + v(f3 f4) - v(f1 f4)|` for an experiment sharp on
/// the quadruple and its commuting products, with `f_j^2 = 1`.
pub fn sharp_chsh_bound(v: &Experiment, q: &BellQuadruple, tol: &Tolerances) -> Result<f64> {
    let fs = q.members();
    for (k, f) in fs.iter().enumerate() {
        if f.square().distance(&f.identity_like())? > tol.value_tol {
            return Err(QcalcError::InvalidQuadruple(format!("f{}^2 != 1", k + 1)));
        }
    }
    let products = [
        fs[0].mul(&fs[1])?,
        fs[1].mul(&fs[2])?,
        fs[2].mul(&fs[3])?,
        fs[0].mul(&fs[3])?,
    ];
    let set: Vec<Quantity> = fs.iter().cloned().chain(products.iter().cloned()).collect();
    let report = match check_sharp_set(v, &set, tol) {
        Ok(r) => r,
        Err(QcalcError::UndefinedValue { index }) => {
            return Err(QcalcError::NotSharp(format!("set member {index} has no value")))
        }
        Err(e) => return Err(e),
    };
    if let Some(bad) = report.rules.iter().find(|r| r.status == CheckStatus::Fail) {
        return Err(QcalcError::NotSharp(format!(
            "{} fails at {:?} (residual {:.3e})",
            bad.rule.name(),
            bad.witness,
            bad.worst_residual
        )));
    }
    let vals = products
        .iter()
        .enumerate()
        .map(|(k, p)| v.require(p, 4 + k, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok((vals[0] + vals[1] + vals[2] - vals[3]).re.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;
    use crate::ensembles::Ensemble;
    use crate::experiments::{consistent_experiment, copenhagen_experiment, point_experiment, table_experiment};
    use nalgebra::DVector;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn point_experiment_is_sharp_on_any_classical_set() {
        let tol = Tolerances::default();
        let v = point_experiment(1, 3).unwrap();
        let set = vec![
            Quantity::classical_real(&[1.0, -2.0, 0.5]).unwrap(),
            Quantity::classical_real(&[0.0, 4.0, 3.0]).unwrap(),
            Quantity::classical_real(&[2.0, 0.0, -1.0]).unwrap(),
        ];
        let report = check_sharp_set(&v, &set, &tol).unwrap();
        assert!(report.is_sharp(), "{report:#?}");
        assert_eq!(report.rule(SharpRule::Sq2).status, CheckStatus::Pass);
    }

    #[test]
    fn mixed_consistent_experiment_fails_squaring_by_variance() {
        let tol = Tolerances::default();
        let e = Ensemble::weights(vec![0.25, 0.75]).unwrap();
        let f = Quantity::classical_real(&[1.0, 3.0]).unwrap();
        let sigma = e.sigma(&f).unwrap();
        let report = check_sharp_set(&consistent_experiment(e), &[f], &tol).unwrap();
        let sq1 = report.rule(SharpRule::Sq1);
        assert_eq!(sq1.status, CheckStatus::Fail);
        assert!((sq1.worst_residual - sigma * sigma).abs() < 1e-12);
        assert_eq!(sq1.witness, Some((0, 0)));
    }

    #[test]
    fn copenhagen_is_sharp_on_common_eigenvectors() {
        let tol = Tolerances::default();
        let v = copenhagen_experiment(DVector::from_vec(vec![c(0.0), c(1.0), c(0.0)]), &tol).unwrap();
        let set = vec![
            Quantity::diagonal(&[c(1.0), c(2.0), c(3.0)]).unwrap(),
            Quantity::diagonal(&[c(-1.0), c(0.5), c(0.0)]).unwrap(),
        ];
        assert!(check_sharp_set(&v, &set, &tol).unwrap().is_sharp());
    }

    #[test]
    fn spectrum_distances() {
        let tol = Tolerances::default();
        let up = copenhagen_experiment(DVector::from_vec(vec![c(1.0), c(0.0)]), &tol).unwrap();
        assert_eq!(spectrum_membership(&up, &pauli(3).unwrap(), &tol).unwrap(), 0.0);
        let plus = Ensemble::pure(DVector::from_vec(vec![c(0.5f64.sqrt()), c(0.5f64.sqrt())])).unwrap();
        let d = spectrum_membership(&consistent_experiment(plus), &pauli(3).unwrap(), &tol).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sharp_chsh_on_classical_points() {
        let tol = Tolerances::default();
        // Four +-1 tuples over the 16 sign patterns, evaluated at every point.
        let col = |k: usize| -> Quantity {
            let vals: Vec<f64> = (0..16).map(|x| if x >> k & 1 == 1 { 1.0 } else { -1.0 }).collect();
            Quantity::classical_real(&vals).unwrap()
        };
        let q = BellQuadruple::new([col(0), col(1), col(2), col(3)], &tol).unwrap();
        for omega in 0..16 {
            let v = point_experiment(omega, 16).unwrap();
            assert!(sharp_chsh_bound(&v, &q, &tol).unwrap() <= 2.0 + 1e-12);
        }
        let ones = Quantity::classical_real(&[1.0; 16]).unwrap();
        let q1 = BellQuadruple::new([ones.clone(), ones.clone(), ones.clone(), ones], &tol).unwrap();
        assert_eq!(
            sharp_chsh_bound(&point_experiment(0, 16).unwrap(), &q1, &tol).unwrap(),
            2.0
        );
    }

    #[test]
    fn inconsistent_table_is_not_sharp() {
        let tol = Tolerances::default();
        let (q, _) = crate::nonlocality::spin_pair_example();
        let fs = q.members().clone();
        let mut entries: Vec<(Quantity, RefValue)> =
            fs.iter().map(|f| (f.clone(), RefValue::Defined(c(1.0)))).collect();
        for (j, k) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            entries.push((fs[j].mul(&fs[k]).unwrap(), RefValue::Defined(c(-1.0))));
        }
        let v = table_experiment(entries);
        assert!(matches!(sharp_chsh_bound(&v, &q, &tol), Err(QcalcError::NotSharp(_))));
    }
}
