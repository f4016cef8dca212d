//! Ensembles: positive, normalized, linear expectation functionals.
//!
//! Four concrete forms are supported: probability weights on `C^n`
//! (`<f> = sum p_k f_k`), pure states (`<f> = psi* f psi`), density matrices
//! (`<f> = tr(rho f)`) and Gibbs ensembles (`<f> = tr(exp(-S/kbar) f)` with
//! the entropy `S` shifted so that the trace of `exp(-S/kbar)` is one).

pub mod axioms;

use nalgebra::{DMatrix, DVector};

use crate::algebra::{linalg, Quantity, Realization};
use crate::error::{QcalcError, Result};
use crate::tolerances::Tolerances;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleForm {
    Weights(DVector<f64>),
    Pure(DVector<C64>),
    Density(DMatrix<C64>),
    Gibbs {
        /// Normalized entropy `S`.
        entropy: DMatrix<C64>,
        kbar: f64,
        /// Cached `exp(-S/kbar)`.
        rho: DMatrix<C64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    form: EnsembleForm,
    tol: Tolerances,
}

/// First and second moments of a pair of quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentStats {
    pub mean_f: C64,
    pub mean_g: C64,
    /// `cov(f, g) = re(<f* g> - <f>* <g>)`
    pub covariance: f64,
    pub sigma_f: f64,
    pub sigma_g: f64,
}

/// Mean value statistics of a family `f_1..f_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakLawStats {
    pub n: usize,
    pub mean_of_mean: C64,
    pub sigma_of_mean: f64,
    /// Largest member uncertainty `sigma(f_l)`.
    pub member_sigma: f64,
    /// Largest pairwise `|cov(f_j, f_k)|`, `j != k`.
    pub max_cross_covariance: f64,
}

impl Ensemble {
    pub fn weights(p: Vec<f64>) -> Result<Self> {
        Self::new(EnsembleForm::Weights(DVector::from_vec(p)), Tolerances::default())
    }

    pub fn pure(psi: DVector<C64>) -> Result<Self> {
        Self::new(EnsembleForm::Pure(psi), Tolerances::default())
    }

    pub fn density(rho: DMatrix<C64>) -> Result<Self> {
        Self::new(EnsembleForm::Density(rho), Tolerances::default())
    }

    /// Gibbs ensemble from an unnormalized Hermitian entropy.
    ///
    /// Returns the ensemble with `S = S_raw + kbar ln tr exp(-S_raw/kbar)`.
    pub fn gibbs(s_raw: &Quantity, kbar: f64) -> Result<Self> {
        gibbs_ensemble(s_raw, kbar, &Tolerances::default())
    }

    /// Validate `form` against `tol`.
    pub fn new(form: EnsembleForm, tol: Tolerances) -> Result<Self> {
        let e = Self { form, tol };
        e.validate()?;
        Ok(e)
    }

    /// Skip validation. Only meant for fault-injection checks.
    pub fn new_unchecked(form: EnsembleForm) -> Self {
        Self {
            form,
            tol: Tolerances::default(),
        }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn form(&self) -> &EnsembleForm {
        &self.form
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn form_name(&self) -> &'static str {
        match self.form {
            EnsembleForm::Weights(_) => "weights",
            EnsembleForm::Pure(_) => "pure",
            EnsembleForm::Density(_) => "density",
            EnsembleForm::Gibbs { .. } => "gibbs",
        }
    }

    pub fn dim(&self) -> usize {
        match &self.form {
            EnsembleForm::Weights(p) => p.len(),
            EnsembleForm::Pure(psi) => psi.len(),
            EnsembleForm::Density(rho) => rho.nrows(),
            EnsembleForm::Gibbs { rho, .. } => rho.nrows(),
        }
    }

    /// The realization whose quantities this ensemble natively evaluates.
    pub fn realization(&self) -> Realization {
        match self.form {
            EnsembleForm::Weights(_) => Realization::Classical,
            _ => Realization::Matrix,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol = &self.tol;
        let bad = |msg: String| Err(QcalcError::InvalidEnsemble(msg));
        if self.dim() == 0 {
            return bad("dimension must be positive".into());
        }
        match &self.form {
            EnsembleForm::Weights(p) => {
                if p.iter().any(|x| !x.is_finite()) {
                    return Err(QcalcError::NonFinite);
                }
                if let Some(w) = p.iter().find(|&&w| w < -tol.psd_tol) {
                    return bad(format!("negative weight {w}"));
                }
                let total: f64 = p.iter().sum();
                if (total - 1.0).abs() > tol.value_tol {
                    return bad(format!("weights sum to {total}"));
                }
            }
            EnsembleForm::Pure(psi) => {
                let norm2 = psi.norm_squared();
                if (norm2 - 1.0).abs() > tol.value_tol {
                    return Err(QcalcError::NotUnit { norm: norm2.sqrt() });
                }
            }
            EnsembleForm::Density(rho) | EnsembleForm::Gibbs { rho, .. } => {
                if rho.nrows() != rho.ncols() {
                    return bad("density matrix must be square".into());
                }
                let q = Quantity::matrix(rho.clone())?;
                let norm = q.spectral_norm();
                if q.hermitian_residual() > tol.herm_tol * norm {
                    return bad("density matrix is not Hermitian".into());
                }
                let min = q.hermitian_eigenvalues()[0];
                if min < -tol.psd_tol * norm.max(1.0) {
                    return bad(format!("density matrix has negative eigenvalue {min}"));
                }
                let tr = linalg::trace(rho);
                if (tr - C64::new(1.0, 0.0)).norm() > tol.value_tol {
                    return bad(format!("density matrix has trace {tr}"));
                }
            }
        }
        Ok(())
    }

    fn check_dim(&self, f: &Quantity) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(QcalcError::DimensionMismatch {
                left: self.dim(),
                right: f.dim(),
            });
        }
        Ok(())
    }

    /// `<f>`
    pub fn expectation(&self, f: &Quantity) -> Result<C64> {
        self.check_dim(f)?;
        match (&self.form, f) {
            (EnsembleForm::Weights(p), Quantity::Classical(v)) => {
                Ok(p.iter().zip(v.iter()).map(|(&w, &x)| x * w).sum())
            }
            (EnsembleForm::Weights(p), Quantity::Matrix(m)) => {
                let off = f.off_diagonal_norm();
                if off > self.tol.herm_tol * f.spectral_norm() {
                    return Err(QcalcError::FormMismatch {
                        form: "weights",
                        reason: format!("matrix quantity is not diagonal (off-diagonal {off:.3e})"),
                    });
                }
                Ok(p.iter().enumerate().map(|(k, &w)| m[(k, k)] * w).sum())
            }
            (EnsembleForm::Pure(psi), Quantity::Matrix(m)) => Ok(psi.dotc(&(m * psi))),
            (EnsembleForm::Density(rho), Quantity::Matrix(m))
            | (EnsembleForm::Gibbs { rho, .. }, Quantity::Matrix(m)) => Ok(linalg::trace_of_product(rho, m)),
            (_, Quantity::Classical(_)) => Err(QcalcError::FormMismatch {
                form: self.form_name(),
                reason: "needs a matrix quantity".into(),
            }),
        }
    }

    /// `<f* g>`
    fn inner(&self, f: &Quantity, g: &Quantity) -> Result<C64> {
        self.expectation(&f.conjugate().mul(g)?)
    }

    pub fn covariance(&self, f: &Quantity, g: &Quantity) -> Result<f64> {
        let mf = self.expectation(f)?;
        let mg = self.expectation(g)?;
        Ok((self.inner(f, g)? - mf.conj() * mg).re)
    }

    /// `sigma(f) = sqrt(max(0, cov(f, f)))`
    pub fn sigma(&self, f: &Quantity) -> Result<f64> {
        Ok(self.covariance(f, f)?.max(0.0).sqrt())
    }

    pub fn moments(&self, f: &Quantity, g: &Quantity) -> Result<MomentStats> {
        Ok(MomentStats {
            mean_f: self.expectation(f)?,
            mean_g: self.expectation(g)?,
            covariance: self.covariance(f, g)?,
            sigma_f: self.sigma(f)?,
            sigma_g: self.sigma(g)?,
        })
    }

    /// `|cov(f, g)| <= value_tol (1 + sigma(f) sigma(g))`
    pub fn is_uncorrelated(&self, f: &Quantity, g: &Quantity, tol: &Tolerances) -> Result<bool> {
        let m = self.moments(f, g)?;
        Ok(m.covariance.abs() <= tol.value_tol * (1.0 + m.sigma_f * m.sigma_g))
    }

    /// `sigma(f)^2 sigma(g)^2 - |cov(f,g)|^2 - |<f* g - g* f>/2|^2`, nonnegative
    /// up to rounding.
    pub fn uncertainty_residual(&self, f: &Quantity, g: &Quantity) -> Result<f64> {
        let m = self.moments(f, g)?;
        let antisym = f.conjugate().mul(g)?.sub(&g.conjugate().mul(f)?)?;
        let half = self.expectation(&antisym)? * 0.5;
        Ok(m.sigma_f.powi(2) * m.sigma_g.powi(2) - m.covariance.powi(2) - half.norm_sqr())
    }

    /// `<f* f><g* g> - |<f* g>|^2`
    pub fn cauchy_schwarz_gap(&self, f: &Quantity, g: &Quantity) -> Result<f64> {
        let ff = self.inner(f, f)?.re;
        let gg = self.inner(g, g)?.re;
        let fg = self.inner(f, g)?;
        Ok(ff * gg - fg.norm_sqr())
    }

    /// Statistics of the mean value `(1/N) sum f_l`.
    pub fn weak_law_stats(&self, fs: &[Quantity]) -> Result<WeakLawStats> {
        let first = fs
            .first()
            .ok_or_else(|| QcalcError::InvalidParameter("empty family".into()))?;
        let means = fs
            .iter()
            .map(|f| {
                f.check_compatible(first)?;
                self.expectation(f)
            })
            .collect::<Result<Vec<_>>>()?;
        let spread = means.iter().map(|m| (m - means[0]).norm()).fold(0.0, f64::max);
        if spread > self.tol.value_tol {
            return Err(QcalcError::UnequalExpectations { spread });
        }
        let n = fs.len();
        let mut sum = first.scale_real(0.0);
        for f in fs {
            sum = sum.add(f)?;
        }
        let mean = sum.scale_real(1.0 / n as f64);
        let member_sigma = fs
            .iter()
            .map(|f| self.sigma(f))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let mut max_cross = 0.0_f64;
        for j in 0..n {
            for k in (j + 1)..n {
                max_cross = max_cross.max(self.covariance(&fs[j], &fs[k])?.abs());
            }
        }
        Ok(WeakLawStats {
            n,
            mean_of_mean: self.expectation(&mean)?,
            sigma_of_mean: self.sigma(&mean)?,
            member_sigma,
            max_cross_covariance: max_cross,
        })
    }

    /// `f` vanishes when `|<f* f>| <= value_tol (1 + ||f||^2)`.
    pub fn vanishes(&self, f: &Quantity, tol: &Tolerances) -> Result<bool> {
        let ff = self.inner(f, f)?;
        let norm = f.spectral_norm();
        Ok(ff.norm() <= tol.value_tol * (1.0 + norm * norm))
    }

    /// Equivalent density matrix (diagonal for weights).
    pub fn density_matrix(&self) -> DMatrix<C64> {
        match &self.form {
            EnsembleForm::Weights(p) => DMatrix::from_diagonal(&p.map(|w| C64::new(w, 0.0))),
            EnsembleForm::Pure(psi) => psi * psi.adjoint(),
            EnsembleForm::Density(rho) | EnsembleForm::Gibbs { rho, .. } => rho.clone(),
        }
    }

    pub fn to_density(&self) -> Result<Ensemble> {
        Ensemble::new(EnsembleForm::Density(self.density_matrix()), self.tol)
    }

    /// Product ensemble on the tensor product space (weights with weights,
    /// anything else through density matrices).
    pub fn product(&self, other: &Ensemble) -> Result<Ensemble> {
        match (&self.form, &other.form) {
            (EnsembleForm::Weights(a), EnsembleForm::Weights(b)) => {
                let mut w = Vec::with_capacity(a.len() * b.len());
                for x in a.iter() {
                    for y in b.iter() {
                        w.push(x * y);
                    }
                }
                Ensemble::new(EnsembleForm::Weights(DVector::from_vec(w)), self.tol)
            }
            (EnsembleForm::Pure(a), EnsembleForm::Pure(b)) => {
                Ensemble::new(EnsembleForm::Pure(a.kronecker(b)), self.tol)
            }
            (EnsembleForm::Weights(_), _) | (_, EnsembleForm::Weights(_)) => Err(QcalcError::FormMismatch {
                form: "weights",
                reason: "cannot combine classical weights with a quantum ensemble".into(),
            }),
            _ => Ensemble::new(
                EnsembleForm::Density(self.density_matrix().kronecker(&other.density_matrix())),
                self.tol,
            ),
        }
    }
}

/// Gibbs ensemble with entropy shifted so that `tr exp(-S/kbar) = 1`.
pub fn gibbs_ensemble(s_raw: &Quantity, kbar: f64, tol: &Tolerances) -> Result<Ensemble> {
    if !(kbar > 0.0 && kbar.is_finite()) {
        return Err(QcalcError::InvalidParameter(format!(
            "kbar must be positive, got {kbar}"
        )));
    }
    let m = match s_raw {
        Quantity::Matrix(m) => m,
        Quantity::Classical(_) => {
            return Err(QcalcError::FormMismatch {
                form: "gibbs",
                reason: "entropy must be a matrix quantity".into(),
            })
        }
    };
    s_raw.require_hermitian(tol)?;
    let (values, vectors) = linalg::hermitian_eigen(m);
    let lowest = values[0];
    let log_z = -lowest / kbar + values.iter().map(|&l| (-(l - lowest) / kbar).exp()).sum::<f64>().ln();
    let shift = kbar * log_z;
    let rho = linalg::spectral_apply(&values, &vectors, |l| C64::new((-l / kbar - log_z).exp(), 0.0));
    let entropy = s_raw.shift(C64::new(shift, 0.0)).to_matrix();
    Ensemble::new(EnsembleForm::Gibbs { entropy, kbar, rho }, *tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{identity, pauli};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn plus_state() -> Ensemble {
        Ensemble::pure(DVector::from_vec(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)])).unwrap()
    }

    #[test]
    fn unity_has_expectation_one_in_every_form() {
        let s = pauli(1).unwrap().add(&pauli(3).unwrap()).unwrap();
        let forms = vec![
            Ensemble::weights(vec![0.2, 0.8]).unwrap(),
            plus_state(),
            Ensemble::density(DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.25), c(0.75)]))).unwrap(),
            Ensemble::gibbs(&s, 0.7).unwrap(),
        ];
        for e in &forms {
            let one = identity(e.realization(), 2);
            assert!(
                (e.expectation(&one).unwrap() - c(1.0)).norm() < 1e-12,
                "{}",
                e.form_name()
            );
        }
    }

    #[test]
    fn pure_expectation_examples() {
        let up = Ensemble::pure(DVector::from_vec(vec![c(1.0), c(0.0)])).unwrap();
        assert_eq!(up.expectation(&pauli(3).unwrap()).unwrap(), c(1.0));
        let m = plus_state().moments(&pauli(3).unwrap(), &pauli(3).unwrap()).unwrap();
        assert!(m.mean_f.norm() < 1e-15);
        assert!((m.sigma_f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constants_have_zero_spread() {
        let e = plus_state();
        let alpha = identity(Realization::Matrix, 2).scale(C64::new(2.0, -1.0));
        assert!(e.sigma(&alpha).unwrap() < 1e-12);
    }

    #[test]
    fn form_and_dimension_mismatch() {
        let e = plus_state();
        let k = Quantity::classical_real(&[1.0, 2.0]).unwrap();
        assert!(matches!(e.expectation(&k), Err(QcalcError::FormMismatch { .. })));
        assert!(matches!(
            e.expectation(&identity(Realization::Matrix, 3)),
            Err(QcalcError::DimensionMismatch { .. })
        ));
        let w = Ensemble::weights(vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            w.expectation(&pauli(1).unwrap()),
            Err(QcalcError::FormMismatch { .. })
        ));
        assert_eq!(w.expectation(&pauli(3).unwrap()).unwrap(), c(0.0));
    }

    #[test]
    fn invalid_ensembles_rejected() {
        assert!(Ensemble::weights(vec![0.6, 0.5]).is_err());
        assert!(Ensemble::weights(vec![1.1, -0.1]).is_err());
        assert!(matches!(
            Ensemble::pure(DVector::from_vec(vec![c(1.0), c(1.0)])),
            Err(QcalcError::NotUnit { .. })
        ));
        let not_psd = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(Ensemble::density(not_psd).is_err());
        assert!(Ensemble::gibbs(&pauli(1).unwrap(), 0.0).is_err());
        let nilpotent = Quantity::matrix_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            Ensemble::gibbs(&nilpotent, 1.0),
            Err(QcalcError::NotHermitian { .. })
        ));
    }

    #[test]
    fn gibbs_of_zero_entropy_is_maximally_mixed() {
        let zero = identity(Realization::Matrix, 2).scale_real(0.0);
        let g = Ensemble::gibbs(&zero, 1.0).unwrap();
        match g.form() {
            EnsembleForm::Gibbs { entropy, rho, .. } => {
                assert!((entropy[(0, 0)].re - 2f64.ln()).abs() < 1e-15);
                assert!((rho[(0, 0)].re - 0.5).abs() < 1e-15);
                assert!((rho[(1, 1)].re - 0.5).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn gibbs_two_level_thermal_weights() {
        let (energy, kbar) = (1.3, 0.6);
        let s = Quantity::diagonal(&[c(0.0), c(energy)]).unwrap();
        let g = Ensemble::gibbs(&s, kbar).unwrap();
        let boltz = (-energy / kbar).exp();
        let z = 1.0 + boltz;
        let rho = g.density_matrix();
        assert!((rho[(0, 0)].re - 1.0 / z).abs() < 1e-14);
        assert!((rho[(1, 1)].re - boltz / z).abs() < 1e-14);
    }

    #[test]
    fn weak_law_on_four_qubits() {
        // sigma_3 on each of four qubits in the product state |+>^4.
        let one = identity(Realization::Matrix, 2);
        let s3 = pauli(3).unwrap();
        let plus = DVector::from_vec(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]);
        let mut psi = plus.clone();
        for _ in 1..4 {
            psi = psi.kronecker(&plus);
        }
        let e = Ensemble::pure(psi).unwrap();
        let fs: Vec<Quantity> = (0..4)
            .map(|site| {
                let mut acc = if site == 0 { s3.clone() } else { one.clone() };
                for k in 1..4 {
                    let factor = if k == site { &s3 } else { &one };
                    acc = acc.tensor(factor).unwrap();
                }
                acc
            })
            .collect();
        let stats = e.weak_law_stats(&fs).unwrap();
        assert!((stats.sigma_of_mean - 0.5).abs() < 1e-12);
        assert!(stats.max_cross_covariance < 1e-12);
    }

    #[test]
    fn weak_law_constant_family_and_unequal_means() {
        let e = plus_state();
        let one = identity(Realization::Matrix, 2);
        let stats = e.weak_law_stats(&vec![one.clone(); 5]).unwrap();
        assert!(stats.sigma_of_mean < 1e-12);
        let fs = vec![pauli(1).unwrap(), pauli(3).unwrap()];
        assert!(matches!(
            e.weak_law_stats(&fs),
            Err(QcalcError::UnequalExpectations { .. })
        ));
    }

    #[test]
    fn vanishing_quantities() {
        let tol = Tolerances::default();
        let up = Ensemble::pure(DVector::from_vec(vec![c(1.0), c(0.0)])).unwrap();
        let lowering = Quantity::matrix_real(2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        // lowering maps (1,0) to (0,1), so it does not vanish; its adjoint kills (1,0).
        assert!(!up.vanishes(&lowering, &tol).unwrap());
        let killer = lowering.conjugate();
        assert!(up.vanishes(&killer, &tol).unwrap());
        assert!(up.expectation(&killer).unwrap().norm() <= tol.value_tol.sqrt());
        let other = Quantity::diagonal(&[c(0.0), c(3.0)]).unwrap();
        assert!(up.vanishes(&other, &tol).unwrap());
        assert!(up.vanishes(&killer.add(&other).unwrap(), &tol).unwrap());
    }

    #[test]
    fn uncertainty_and_cauchy_schwarz_examples() {
        let e = plus_state();
        let s1 = pauli(1).unwrap();
        let s3 = pauli(3).unwrap();
        assert!(e.cauchy_schwarz_gap(&s1, &s1).unwrap().abs() < 1e-12);
        let one = identity(Realization::Matrix, 2);
        let gap = e.cauchy_schwarz_gap(&s3, &one).unwrap();
        let sigma = e.sigma(&s3).unwrap();
        assert!((gap - sigma * sigma).abs() < 1e-12);
        assert!(e.uncertainty_residual(&s1, &s3).unwrap() >= -1e-12);
    }
}
