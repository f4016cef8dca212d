//! Experiments: partial assignments of complex reference values to quantities.
//!
//! Four forms are provided. A classical point experiment evaluates tuples at a
//! fixed index. A Copenhagen experiment assigns `psi* f psi` when `psi` is an
//! eigenvector of `f` and leaves every other value undefined. A consistent
//! experiment assigns ensemble expectations, optionally on a restricted domain.
//! A table experiment lists values explicitly and may be inconsistent on purpose.

mod nogo;
mod sharp;
mod studies;

pub use nogo::{kochen_specker_search, SearchResult};
pub use sharp::{check_sharp_set, sharp_chsh_bound, spectrum_membership, RuleOutcome, SharpRule, SharpSetReport};
pub use studies::{
    consistency_bound_check, hydrogen_case_study, macroscopic_reference, moon_case_study, young_measure_demo,
    HydrogenStudy, MoonStudy, YoungMeasure,
};

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;

use crate::algebra::{Quantity, Realization};
use crate::ensembles::Ensemble;
use crate::error::{QcalcError, Result};
use crate::exec::Exec;
use crate::random;
use crate::report::{worst_per_column, AxiomReport};
use crate::rng::RngStreams;
use crate::tolerances::Tolerances;
use crate::C64;

/// A reference value, or the undefined marker `?`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefValue {
    Defined(C64),
    Undefined,
}

impl RefValue {
    pub fn defined(self) -> Option<C64> {
        match self {
            RefValue::Defined(z) => Some(z),
            RefValue::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, RefValue::Defined(_))
    }
}

impl std::ops::Mul for RefValue {
    type Output = RefValue;

    /// `?` propagates except through an exact zero factor: `0 ? = ? 0 = 0`.
    fn mul(self, other: RefValue) -> RefValue {
        let zero = C64::new(0.0, 0.0);
        match (self, other) {
            (RefValue::Defined(a), RefValue::Defined(b)) => RefValue::Defined(a * b),
            (RefValue::Defined(a), RefValue::Undefined) | (RefValue::Undefined, RefValue::Defined(a)) if a == zero => {
                RefValue::Defined(zero)
            }
            _ => RefValue::Undefined,
        }
    }
}

impl std::ops::Add for RefValue {
    type Output = RefValue;

    fn add(self, other: RefValue) -> RefValue {
        match (self, other) {
            (RefValue::Defined(a), RefValue::Defined(b)) => RefValue::Defined(a + b),
            _ => RefValue::Undefined,
        }
    }
}

/// Predicate restricting which quantities a consistent experiment assigns.
#[derive(Clone)]
pub struct Domain(Arc<dyn Fn(&Quantity) -> bool + Send + Sync>);

impl Domain {
    pub fn new(pred: impl Fn(&Quantity) -> bool + Send + Sync + 'static) -> Self {
        Self(Arc::new(pred))
    }

    pub fn contains(&self, f: &Quantity) -> bool {
        (self.0)(f)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Domain(..)")
    }
}

#[derive(Debug, Clone)]
pub enum Experiment {
    Point { omega: usize, dim: usize },
    Copenhagen { psi: DVector<C64> },
    Consistent { ensemble: Ensemble, domain: Option<Domain> },
    Table { entries: Vec<(Quantity, RefValue)> },
}

pub fn point_experiment(omega: usize, dim: usize) -> Result<Experiment> {
    if omega >= dim {
        return Err(QcalcError::IndexOutOfRange { index: omega, dim });
    }
    Ok(Experiment::Point { omega, dim })
}

pub fn copenhagen_experiment(psi: DVector<C64>, tol: &Tolerances) -> Result<Experiment> {
    let norm = psi.norm();
    if (norm * norm - 1.0).abs() > tol.value_tol {
        return Err(QcalcError::NotUnit { norm });
    }
    Ok(Experiment::Copenhagen { psi })
}

pub fn consistent_experiment(ensemble: Ensemble) -> Experiment {
    Experiment::Consistent { ensemble, domain: None }
}

pub fn table_experiment(entries: Vec<(Quantity, RefValue)>) -> Experiment {
    Experiment::Table { entries }
}

impl Experiment {
    pub fn dim(&self) -> Option<usize> {
        match self {
            Experiment::Point { dim, .. } => Some(*dim),
            Experiment::Copenhagen { psi } => Some(psi.len()),
            Experiment::Consistent { ensemble, .. } => Some(ensemble.dim()),
            Experiment::Table { entries } => entries.first().map(|(q, _)| q.dim()),
        }
    }

    pub fn realization(&self) -> Option<Realization> {
        match self {
            Experiment::Point { .. } => Some(Realization::Classical),
            Experiment::Copenhagen { .. } => Some(Realization::Matrix),
            Experiment::Consistent { ensemble, .. } => Some(ensemble.realization()),
            Experiment::Table { entries } => entries.first().map(|(q, _)| q.realization()),
        }
    }

    /// `v(f)`.
    pub fn evaluate(&self, f: &Quantity, tol: &Tolerances) -> Result<RefValue> {
        if let Some(n) = self.dim() {
            if n != f.dim() {
                return Err(QcalcError::DimensionMismatch {
                    left: n,
                    right: f.dim(),
                });
            }
        }
        match self {
            Experiment::Point { omega, .. } => match f {
                Quantity::Classical(v) => Ok(RefValue::Defined(v[*omega])),
                Quantity::Matrix(_) => Err(QcalcError::RealizationMismatch {
                    left: Realization::Classical,
                    right: Realization::Matrix,
                }),
            },
            Experiment::Copenhagen { psi } => {
                let m = f.as_matrix().ok_or(QcalcError::RealizationMismatch {
                    left: Realization::Matrix,
                    right: Realization::Classical,
                })?;
                let image = m * psi;
                let lambda = psi.dotc(&image);
                let residual = (image - psi * lambda).norm();
                Ok(if residual <= tol.value_tol * f.spectral_norm() {
                    RefValue::Defined(lambda)
                } else {
                    RefValue::Undefined
                })
            }
            Experiment::Consistent { ensemble, domain } => {
                if domain.as_ref().is_some_and(|d| !d.contains(f)) {
                    return Ok(RefValue::Undefined);
                }
                Ok(RefValue::Defined(ensemble.expectation(f)?))
            }
            Experiment::Table { entries } => {
                let scale = 1.0 + f.spectral_norm();
                for (q, value) in entries {
                    if q.realization() == f.realization() && q.distance(f)? <= tol.value_tol * scale {
                        return Ok(*value);
                    }
                }
                // Scalars are always assigned their own value.
                Ok(match f.as_scalar(tol.value_tol) {
                    Some(alpha) => RefValue::Defined(alpha),
                    None => RefValue::Undefined,
                })
            }
        }
    }

    /// `v(f)`, failing with `UndefinedValue { index }` when it is `?`.
    pub fn require(&self, f: &Quantity, index: usize, tol: &Tolerances) -> Result<C64> {
        self.evaluate(f, tol)?
            .defined()
            .ok_or(QcalcError::UndefinedValue { index })
    }
}

/// A random quantity that has `psi` as an eigenvector half of the time.
fn probe_for<R: Rng>(rng: &mut R, v: &Experiment, realization: Realization, n: usize) -> Quantity {
    if let (Experiment::Copenhagen { psi }, true) = (v, rng.random_bool(0.5)) {
        let proj = psi * psi.adjoint();
        let rest = nalgebra::DMatrix::<C64>::identity(n, n) - &proj;
        let m = random::hermitian(rng, Realization::Matrix, n).to_matrix();
        let lambda = random::real_scalar(rng);
        let f = proj * C64::new(lambda, 0.0) + &rest * m * &rest;
        return Quantity::matrix(f).expect("finite");
    }
    random::hermitian(rng, realization, n)
}

/// Randomized check of affinity (S1) and reality (S2).
pub fn check_s_axioms(
    v: &Experiment,
    streams: &RngStreams,
    samples: usize,
    tol: &Tolerances,
    exec: Exec,
) -> Result<AxiomReport> {
    let (realization, n) = match (v.realization(), v.dim()) {
        (Some(r), Some(n)) => (r, n),
        _ => return Err(QcalcError::InvalidParameter("experiment has no quantities".into())),
    };
    let rows = exec.map(samples, |i| {
        let mut rng = streams.stream(i as u64);
        let f = probe_for(&mut rng, v, realization, n);
        let alpha = random::complex_normal(&mut rng);
        let beta = random::complex_normal(&mut rng);
        let vf = v.evaluate(&f, tol).unwrap_or(RefValue::Undefined);
        let Some(vf) = vf.defined() else {
            return vec![0.0, 0.0, 0.0];
        };
        let g = f.scale(beta).shift(alpha);
        let s1 = match v.evaluate(&g, tol).unwrap_or(RefValue::Undefined) {
            RefValue::Defined(vg) => (vg - (alpha + beta * vf)).norm() / (1.0 + beta.norm() * f.spectral_norm()),
            RefValue::Undefined => f64::INFINITY,
        };
        let s2 = (vf.im.abs() - tol.herm_tol * f.spectral_norm().max(1.0)).max(0.0);
        vec![s1, s2, 1.0]
    });
    let defined = rows.iter().filter(|r| r[2] == 1.0).count();
    let worst = worst_per_column(&rows, 2);
    let mut report = AxiomReport::new("experiment axioms");
    report.record(
        "S1",
        worst[0],
        tol.value_tol,
        defined,
        "v(a + b f) = a + b v(f) when v(f) is defined",
    );
    report.record("S2", worst[1], tol.value_tol, defined, "Hermitian f has real v(f)");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;
    use crate::report::CheckStatus;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn undefined_arithmetic() {
        let zero = RefValue::Defined(c(0.0));
        assert_eq!(zero * RefValue::Undefined, zero);
        assert_eq!(RefValue::Undefined * zero, zero);
        assert_eq!(RefValue::Defined(c(2.0)) * RefValue::Undefined, RefValue::Undefined);
        assert_eq!(zero + RefValue::Undefined, RefValue::Undefined);
    }

    #[test]
    fn point_evaluation() {
        let tol = Tolerances::default();
        let v = point_experiment(1, 3).unwrap();
        let f = Quantity::classical_real(&[3.0, 5.0, 7.0]).unwrap();
        assert_eq!(v.evaluate(&f, &tol).unwrap(), RefValue::Defined(c(5.0)));
        let alpha = f.scalar_like(C64::new(0.5, -2.0));
        assert_eq!(
            v.evaluate(&alpha, &tol).unwrap(),
            RefValue::Defined(C64::new(0.5, -2.0))
        );
        assert!(matches!(
            point_experiment(3, 3),
            Err(QcalcError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn copenhagen_evaluation() {
        let tol = Tolerances::default();
        let up = copenhagen_experiment(DVector::from_vec(vec![c(1.0), c(0.0)]), &tol).unwrap();
        assert_eq!(
            up.evaluate(&pauli(3).unwrap(), &tol).unwrap(),
            RefValue::Defined(c(1.0))
        );
        assert_eq!(up.evaluate(&pauli(1).unwrap(), &tol).unwrap(), RefValue::Undefined);
        let plus = copenhagen_experiment(DVector::from_vec(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]), &tol).unwrap();
        let v = plus.evaluate(&pauli(1).unwrap(), &tol).unwrap().defined().unwrap();
        assert!((v - c(1.0)).norm() < 1e-15);
        assert!(copenhagen_experiment(DVector::from_vec(vec![c(1.0), c(1.0)]), &tol).is_err());
    }

    #[test]
    fn consistent_domain_restriction() {
        let tol = Tolerances::default();
        let e = Ensemble::weights(vec![0.5, 0.5]).unwrap();
        let v = Experiment::Consistent {
            ensemble: e,
            domain: Some(Domain::new(|f| f.is_hermitian(&Tolerances::default()))),
        };
        let f = Quantity::classical_real(&[1.0, 3.0]).unwrap();
        assert_eq!(v.evaluate(&f, &tol).unwrap(), RefValue::Defined(c(2.0)));
        let g = Quantity::classical(vec![C64::new(0.0, 1.0), c(0.0)]).unwrap();
        assert_eq!(v.evaluate(&g, &tol).unwrap(), RefValue::Undefined);
    }

    #[test]
    fn s_axioms_hold_for_every_form() {
        let tol = Tolerances::default();
        let streams = RngStreams::new(21, "s-axioms");
        let forms = vec![
            point_experiment(2, 4).unwrap(),
            copenhagen_experiment(random::unit_vector(&mut streams.stream(99), 3), &tol).unwrap(),
            consistent_experiment(random::ensemble(&mut streams.stream(98), Realization::Matrix, 3)),
        ];
        for v in &forms {
            let report = check_s_axioms(v, &streams, 200, &tol, Exec::Parallel).unwrap();
            assert!(report.all_passed(), "{report:#?}");
            assert!(report
                .entries
                .iter()
                .all(|e| e.samples > 0 && e.status == CheckStatus::Pass));
        }
    }
}
