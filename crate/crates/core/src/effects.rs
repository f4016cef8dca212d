//! Effects (`0 <= e <= 1`), events (`e^2 = e = e*`), alternatives, and the
//! statistics of relative frequencies.
//!
//! Logical connectives are only defined for commuting effects; asking for them
//! on a noncommuting pair is an error rather than a silent symmetrization.

use nalgebra::DVector;

use crate::algebra::Quantity;
use crate::ensembles::{Ensemble, EnsembleForm};
use crate::error::{QcalcError, Result};
use crate::tolerances::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectKind {
    Effect,
    Event,
}

/// A quantity validated as an effect or event.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectView {
    q: Quantity,
    kind: EffectKind,
}

/// Classify `f` as an event, an effect, or neither.
pub fn validate_effect(f: &Quantity, tol: &Tolerances) -> Result<EffectView> {
    let one = f.identity_like();
    // Both bounds are measured against the unit, so nearly vanishing effects pass.
    let is_effect = f.nonnegative_at_scale(1.0, tol) && f.leq(&one, tol)?;
    if !is_effect {
        let eig = f.hermitian_eigenvalues();
        return Err(QcalcError::NotAnEffect {
            min_eigenvalue: eig[0],
            max_eigenvalue: eig[eig.len() - 1],
        });
    }
    let norm = f.spectral_norm();
    let idempotent = f.square().distance(f)? <= tol.value_tol * (1.0 + norm);
    let kind = if idempotent && f.is_hermitian(tol) {
        EffectKind::Event
    } else {
        EffectKind::Effect
    };
    Ok(EffectView { q: f.clone(), kind })
}

impl EffectView {
    pub fn quantity(&self) -> &Quantity {
        &self.q
    }

    pub fn kind(&self) -> EffectKind {
        self.kind
    }

    pub fn is_event(&self) -> bool {
        self.kind == EffectKind::Event
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// `not e = 1 - e`; events stay events.
    pub fn negate(&self) -> EffectView {
        EffectView {
            q: self.q.neg().shift(C64::new(1.0, 0.0)),
            kind: self.kind,
        }
    }

    /// Effects lie below the unit, so `commute_tol` applies without rescaling.
    fn require_commuting(&self, other: &EffectView, tol: &Tolerances) -> Result<()> {
        let residual = self.q.commutator(&other.q)?.spectral_norm();
        if residual > tol.commute_tol {
            return Err(QcalcError::NonCommuting { residual });
        }
        Ok(())
    }

    /// `(e and e', e or e') = (e e', e + e' - e e')` for commuting effects.
    pub fn and_or(&self, other: &EffectView, tol: &Tolerances) -> Result<(EffectView, EffectView)> {
        self.require_commuting(other, tol)?;
        let product = self.q.mul(&other.q)?;
        let union = self.q.add(&other.q)?.sub(&product)?;
        Ok((validate_effect(&product, tol)?, validate_effect(&union, tol)?))
    }

    pub fn and(&self, other: &EffectView, tol: &Tolerances) -> Result<EffectView> {
        Ok(self.and_or(other, tol)?.0)
    }

    pub fn or(&self, other: &EffectView, tol: &Tolerances) -> Result<EffectView> {
        Ok(self.and_or(other, tol)?.1)
    }
}

/// `<e>`, unclamped.
pub fn probability(e: &Ensemble, effect: &EffectView) -> Result<f64> {
    Ok(e.expectation(&effect.q)?.re)
}

/// `<e e'> = <e><e'>` for a commuting pair.
pub fn independent(e: &Ensemble, a: &EffectView, b: &EffectView, tol: &Tolerances) -> Result<bool> {
    a.require_commuting(b, tol)?;
    let joint = e.expectation(&a.q.mul(&b.q)?)?.re;
    Ok((joint - probability(e, a)? * probability(e, b)?).abs() <= tol.value_tol)
}

fn require_unit(v: &DVector<C64>, tol: &Tolerances) -> Result<()> {
    let norm = v.norm();
    if (norm * norm - 1.0).abs() > tol.value_tol {
        return Err(QcalcError::NotUnit { norm });
    }
    Ok(())
}

/// The event `phi phi*` for a unit vector `phi`.
pub fn irreducible_event(phi: &DVector<C64>, tol: &Tolerances) -> Result<EffectView> {
    require_unit(phi, tol)?;
    Ok(EffectView {
        q: Quantity::matrix(phi * phi.adjoint())?,
        kind: EffectKind::Event,
    })
}

/// `|phi* psi|^2`, the probability of `phi phi*` in the pure state `psi`.
pub fn transition_probability(psi: &DVector<C64>, phi: &DVector<C64>, tol: &Tolerances) -> Result<f64> {
    require_unit(psi, tol)?;
    require_unit(phi, tol)?;
    if psi.len() != phi.len() {
        return Err(QcalcError::DimensionMismatch {
            left: psi.len(),
            right: phi.len(),
        });
    }
    Ok(phi.dotc(psi).norm_sqr())
}

/// A family of effects with `sum e_l <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Alternative {
    members: Vec<EffectView>,
}

impl Alternative {
    pub fn members(&self) -> &[EffectView] {
        &self.members
    }

    pub fn sum(&self) -> Quantity {
        let mut acc = self.members[0].q.scale_real(0.0);
        for m in &self.members {
            acc = acc.add(&m.q).expect("validated members are compatible");
        }
        acc
    }
}

pub fn check_alternative(members: Vec<EffectView>, tol: &Tolerances) -> Result<Alternative> {
    let first = members
        .first()
        .ok_or_else(|| QcalcError::InvalidParameter("empty alternative".into()))?;
    for m in &members {
        m.q.check_compatible(&first.q)?;
    }
    let alt = Alternative { members };
    let sum = alt.sum();
    if !sum.leq(&sum.identity_like(), tol)? {
        let eig = sum.hermitian_eigenvalues();
        return Err(QcalcError::SumExceedsOne {
            max_eigenvalue: eig[eig.len() - 1],
        });
    }
    for (i, a) in alt.members.iter().enumerate() {
        for (j, b) in alt.members.iter().enumerate().skip(i + 1) {
            if a.is_event() && b.is_event() {
                let residual = a.q.mul(&b.q)?.spectral_norm();
                if residual > tol.value_tol {
                    return Err(QcalcError::NotDisjoint {
                        first: i,
                        second: j,
                        residual,
                    });
                }
            }
        }
    }
    Ok(alt)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyStats {
    pub n: usize,
    /// Common probability `<q>`.
    pub p: f64,
    /// `sigma(q)` for the relative frequency `q = (1/N) sum e_l`.
    pub sigma_q: f64,
    /// `sqrt(p (1 - p) / N)`, attained for pairwise independent events.
    pub predicted_sigma: f64,
}

pub fn relative_frequency_stats(e: &Ensemble, events: &[EffectView], tol: &Tolerances) -> Result<FrequencyStats> {
    let first = events
        .first()
        .ok_or_else(|| QcalcError::InvalidParameter("empty event family".into()))?;
    let probs = events.iter().map(|ev| probability(e, ev)).collect::<Result<Vec<_>>>()?;
    let spread = probs.iter().map(|p| (p - probs[0]).abs()).fold(0.0, f64::max);
    if spread > tol.value_tol {
        return Err(QcalcError::UnequalProbabilities { spread });
    }
    let n = events.len();
    let mut q = first.q.scale_real(0.0);
    for ev in events {
        q = q.add(&ev.q)?;
    }
    let q = q.scale_real(1.0 / n as f64);
    let p = e.expectation(&q)?.re;
    Ok(FrequencyStats {
        n,
        p,
        sigma_q: e.sigma(&q)?,
        predicted_sigma: (p * (1.0 - p) / n as f64).max(0.0).sqrt(),
    })
}

/// Pairwise independent classical events on the uniform sample space `F_p^m`.
///
/// One event per projective point `a` (first nonzero coordinate 1):
/// `e_a(x) = [<a, x> mod p in accept]`. Distinct projective points are
/// linearly independent, so `(<a,x>, <b,x>)` is uniform on `F_p^2` and the
/// events are pairwise independent with probability `|accept| / p`. There
/// are `(p^m - 1) / (p - 1)` of them on a space of dimension `p^m`.
pub fn pairwise_independent_events(prime: u32, m: u32, accept: &[u32]) -> Result<(Ensemble, Vec<EffectView>)> {
    let is_prime = prime >= 2
        && (2..prime)
            .take_while(|d| d * d <= prime)
            .all(|d| !prime.is_multiple_of(d));
    if !is_prime || m == 0 || accept.iter().any(|&a| a >= prime) {
        return Err(QcalcError::InvalidParameter(format!(
            "need a prime field, m >= 1 and residues below {prime}"
        )));
    }
    let dim = (prime as usize)
        .checked_pow(m)
        .filter(|&d| d <= 1 << 16)
        .ok_or_else(|| QcalcError::InvalidParameter("sample space too large".into()))?;
    let digits = |mut x: usize| -> Vec<u32> {
        (0..m)
            .map(|_| {
                let d = (x % prime as usize) as u32;
                x /= prime as usize;
                d
            })
            .collect()
    };
    let points: Vec<Vec<u32>> = (1..dim)
        .map(digits)
        .filter(|a| a.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    let samples: Vec<Vec<u32>> = (0..dim).map(digits).collect();
    let events = points
        .iter()
        .map(|a| {
            let values: Vec<C64> = samples
                .iter()
                .map(|x| {
                    let dot = a.iter().zip(x).map(|(u, v)| u * v).sum::<u32>() % prime;
                    C64::new(if accept.contains(&dot) { 1.0 } else { 0.0 }, 0.0)
                })
                .collect();
            Ok(EffectView {
                q: Quantity::classical(values)?,
                kind: EffectKind::Event,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ensemble = Ensemble::new(
        EnsembleForm::Weights(DVector::from_element(dim, 1.0 / dim as f64)),
        Tolerances::default(),
    )?;
    Ok((ensemble, events))
}

/// `n` fully independent classical events of probability `p` on `{0,1}^n`.
pub fn product_events(p: f64, n: usize) -> Result<(Ensemble, Vec<EffectView>)> {
    if !(0.0..=1.0).contains(&p) || n == 0 || n > 16 {
        return Err(QcalcError::InvalidParameter(format!(
            "need 0 <= p <= 1 and 1 <= n <= 16, got p = {p}, n = {n}"
        )));
    }
    let dim = 1usize << n;
    let weights: Vec<f64> = (0..dim)
        .map(|x| {
            let ones = x.count_ones() as i32;
            p.powi(ones) * (1.0 - p).powi(n as i32 - ones)
        })
        .collect();
    let events = (0..n)
        .map(|l| {
            let values: Vec<C64> = (0..dim).map(|x| C64::new(((x >> l) & 1) as f64, 0.0)).collect();
            Ok(EffectView {
                q: Quantity::classical(values)?,
                kind: EffectKind::Event,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Ensemble::weights(weights)?, events))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{identity, pauli, Realization};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag(d: &[f64]) -> Quantity {
        Quantity::diagonal(&d.iter().map(|&x| c(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn classification_examples() {
        let tol = Tolerances::default();
        assert_eq!(
            validate_effect(&diag(&[1.0, 0.0]), &tol).unwrap().kind(),
            EffectKind::Event
        );
        let e = validate_effect(&identity(Realization::Matrix, 2).scale_real(0.3), &tol).unwrap();
        assert_eq!(e.kind(), EffectKind::Effect);
        let bad = Quantity::matrix_real(2, &[0.5, 0.25, 0.25, 0.0]).unwrap();
        match validate_effect(&bad, &tol) {
            Err(QcalcError::NotAnEffect { min_eigenvalue, .. }) => {
                assert!((min_eigenvalue - (1.0 - 2f64.sqrt()) / 4.0).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symmetrized_product_of_projectors_is_not_an_effect() {
        // e = diag(1,0), e' = (1 + sigma_1)/2; (ee' + e'e)/2 = [[1/2,1/4],[1/4,0]].
        let tol = Tolerances::default();
        let e = diag(&[1.0, 0.0]);
        let e2 = pauli(1).unwrap().shift(c(1.0)).scale_real(0.5);
        let sym = e.mul(&e2).unwrap().add(&e2.mul(&e).unwrap()).unwrap().scale_real(0.5);
        assert!(validate_effect(&sym, &tol).is_err());
    }

    #[test]
    fn negation_and_connectives() {
        let tol = Tolerances::default();
        let e = validate_effect(&diag(&[1.0, 0.0]), &tol).unwrap();
        assert_eq!(e.negate().quantity(), &diag(&[0.0, 1.0]));
        let a = validate_effect(&diag(&[1.0, 1.0, 0.0]), &tol).unwrap();
        let b = validate_effect(&diag(&[0.0, 1.0, 1.0]), &tol).unwrap();
        let (and, or) = a.and_or(&b, &tol).unwrap();
        assert_eq!(and.quantity(), &diag(&[0.0, 1.0, 0.0]));
        assert!(and.is_event());
        assert_eq!(or.quantity(), &diag(&[1.0, 1.0, 1.0]));
        let p1 = validate_effect(&pauli(1).unwrap().shift(c(1.0)).scale_real(0.5), &tol).unwrap();
        let p3 = validate_effect(&pauli(3).unwrap().shift(c(1.0)).scale_real(0.5), &tol).unwrap();
        assert!(matches!(p1.and_or(&p3, &tol), Err(QcalcError::NonCommuting { .. })));
    }

    #[test]
    fn probabilities_and_transitions() {
        let tol = Tolerances::default();
        let plus = DVector::from_vec(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]);
        let up = DVector::from_vec(vec![c(1.0), c(0.0)]);
        let e = Ensemble::pure(plus.clone()).unwrap();
        let ev = validate_effect(&diag(&[1.0, 0.0]), &tol).unwrap();
        assert!((probability(&e, &ev).unwrap() - 0.5).abs() < 1e-15);
        assert!((probability(&e, &ev.negate()).unwrap() - 0.5).abs() < 1e-15);
        assert!((transition_probability(&up, &plus, &tol).unwrap() - 0.5).abs() < 1e-15);
        let proj = irreducible_event(&plus, &tol).unwrap();
        assert!((probability(&e, &proj).unwrap() - 1.0).abs() < 1e-15);
        assert!(!independent(&e, &ev, &ev, &tol).unwrap());
        assert!(matches!(
            irreducible_event(&DVector::from_vec(vec![c(1.0), c(1.0)]), &tol),
            Err(QcalcError::NotUnit { .. })
        ));
    }

    #[test]
    fn alternatives() {
        let tol = Tolerances::default();
        let a = validate_effect(&diag(&[1.0, 0.0, 0.0]), &tol).unwrap();
        let b = validate_effect(&diag(&[0.0, 1.0, 0.0]), &tol).unwrap();
        assert!(check_alternative(vec![a.clone(), b], &tol).is_ok());
        assert!(check_alternative(vec![a.clone(), a.negate()], &tol).is_ok());
        let x = validate_effect(&Quantity::classical_real(&[0.6]).unwrap(), &tol).unwrap();
        let y = validate_effect(&Quantity::classical_real(&[0.5]).unwrap(), &tol).unwrap();
        assert!(matches!(
            check_alternative(vec![x, y], &tol),
            Err(QcalcError::SumExceedsOne { .. })
        ));
    }

    #[test]
    fn frequency_statistics_for_independent_families() {
        let tol = Tolerances::default();
        let (e, events) = pairwise_independent_events(2, 7, &[1]).unwrap();
        assert_eq!(events.len(), 127);
        let stats = relative_frequency_stats(&e, &events[..100], &tol).unwrap();
        assert!((stats.p - 0.5).abs() < 1e-12);
        assert!((stats.sigma_q - 0.05).abs() < 1e-12);

        let (e, events) = pairwise_independent_events(5, 3, &[1]).unwrap();
        assert_eq!(events.len(), 31);
        let stats = relative_frequency_stats(&e, &events[..25], &tol).unwrap();
        assert!((stats.sigma_q - 0.08).abs() < 1e-12);

        let (e, events) = product_events(0.3, 6).unwrap();
        let stats = relative_frequency_stats(&e, &events, &tol).unwrap();
        assert!((stats.sigma_q - (0.21f64 / 6.0).sqrt()).abs() < 1e-12);
        let single = relative_frequency_stats(&e, &events[..1], &tol).unwrap();
        assert!((single.sigma_q - 0.21f64.sqrt()).abs() < 1e-12);
    }
}
