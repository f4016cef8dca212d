//! Unitary dynamics of finite quantum systems and the classical harmonic
//! oscillator.
//!
//! Convention: `U(t) = exp(i t H / hbar)` and `S_t(f) = U f U*`, so that
//! `i hbar df/dt = [f, H]` and `df/dt = (i/hbar)[H, f]`. States move the
//! other way: `rho(t) = U* rho U` and `psi(t) = U* psi`, giving
//! `i hbar drho/dt = [H, rho]` and `<S_t(f)>_E = <f>_{E_t}`.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{linalg, Quantity, Realization};
use crate::ensembles::{Ensemble, EnsembleForm};
use crate::error::{QcalcError, Result};
use crate::exec::Exec;
use crate::random;
use crate::report::{worst_per_column, AxiomReport};
use crate::rng::RngStreams;
use crate::tolerances::Tolerances;
use crate::C64;

/// A Hamiltonian with its cached eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumDynamics {
    hamiltonian: Quantity,
    hbar: f64,
    energies: DVector<f64>,
    modes: DMatrix<C64>,
}

impl QuantumDynamics {
    pub fn new(hamiltonian: Quantity, hbar: f64, tol: &Tolerances) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(QcalcError::InvalidParameter(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        let Quantity::Matrix(m) = &hamiltonian else {
            return Err(QcalcError::RealizationMismatch {
                left: Realization::Matrix,
                right: Realization::Classical,
            });
        };
        hamiltonian.require_hermitian(tol)?;
        let (energies, modes) = linalg::hermitian_eigen(m);
        Ok(Self {
            hamiltonian,
            hbar,
            energies,
            modes,
        })
    }

    pub fn hamiltonian(&self) -> &Quantity {
        &self.hamiltonian
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// `exp(i t H / hbar)`
    pub fn propagator(&self, t: f64) -> DMatrix<C64> {
        let scale = t / self.hbar;
        linalg::spectral_apply(&self.energies, &self.modes, |e| C64::new(0.0, e * scale).exp())
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(QcalcError::DimensionMismatch {
                left: self.dim(),
                right: n,
            });
        }
        Ok(())
    }

    /// `S_t(f) = U f U*`
    pub fn heisenberg_evolve(&self, f: &Quantity, t: f64) -> Result<Quantity> {
        self.check_dim(f.dim())?;
        let u = self.propagator(t);
        Quantity::matrix(&u * f.to_matrix() * u.adjoint())
    }

    /// `E_t` with `<f>_{E_t} = <S_t(f)>_E`.
    pub fn schrodinger_evolve(&self, e: &Ensemble, t: f64) -> Result<Ensemble> {
        self.check_dim(e.dim())?;
        let u = self.propagator(t);
        let ud = u.adjoint();
        let form = match e.form() {
            EnsembleForm::Pure(psi) => EnsembleForm::Pure(&ud * psi),
            EnsembleForm::Density(rho) => EnsembleForm::Density(&ud * rho * &u),
            EnsembleForm::Gibbs { entropy, kbar, rho } => EnsembleForm::Gibbs {
                entropy: &ud * entropy * &u,
                kbar: *kbar,
                rho: &ud * rho * &u,
            },
            EnsembleForm::Weights(_) => {
                return Err(QcalcError::FormMismatch {
                    form: "weights",
                    reason: "quantum dynamics needs a pure, density or Gibbs ensemble".into(),
                })
            }
        };
        Ensemble::new(form, *e.tolerances())
    }

    /// `1e-4` times the characteristic time `1 / ||H||`.
    pub fn default_dt(&self) -> f64 {
        let norm = self.hamiltonian.spectral_norm();
        if norm > 0.0 {
            1e-4 * self.hbar / norm
        } else {
            1e-4
        }
    }

    /// `|| i hbar (f(t+dt) - f(t-dt)) / (2 dt) - [f(t), H] ||`
    pub fn heisenberg_residual(&self, f: &Quantity, t: f64, dt: f64) -> Result<f64> {
        require_step(dt)?;
        let ahead = self.heisenberg_evolve(f, t + dt)?;
        let behind = self.heisenberg_evolve(f, t - dt)?;
        let lhs = ahead.sub(&behind)?.scale(C64::new(0.0, self.hbar / (2.0 * dt)));
        let rhs = self.heisenberg_evolve(f, t)?.commutator(&self.hamiltonian)?;
        lhs.distance(&rhs)
    }

    /// `|| i hbar (rho(t+dt) - rho(t-dt)) / (2 dt) - [H, rho(t)] ||`
    pub fn von_neumann_residual(&self, rho: &Ensemble, t: f64, dt: f64) -> Result<f64> {
        require_step(dt)?;
        let at = |s: f64| -> Result<Quantity> { Quantity::matrix(self.schrodinger_evolve(rho, s)?.density_matrix()) };
        let lhs = at(t + dt)?
            .sub(&at(t - dt)?)?
            .scale(C64::new(0.0, self.hbar / (2.0 * dt)));
        let rhs = self.hamiltonian.commutator(&at(t)?)?;
        lhs.distance(&rhs)
    }

    /// Central-difference derivative of `<f(t)>`.
    fn expectation_rate(&self, e: &Ensemble, f: &Quantity, t: f64, dt: f64) -> Result<C64> {
        require_step(dt)?;
        let ahead = e.expectation(&self.heisenberg_evolve(f, t + dt)?)?;
        let behind = e.expectation(&self.heisenberg_evolve(f, t - dt)?)?;
        Ok((ahead - behind) / (2.0 * dt))
    }

    /// `< (i/hbar) [a, b] >` with `a, b` evaluated at time `t`.
    fn bracket_mean(&self, e: &Ensemble, a: &Quantity, b: &Quantity) -> Result<C64> {
        Ok(e.expectation(&a.commutator(b)?)? * C64::new(0.0, 1.0 / self.hbar))
    }

    /// `| d<f(t)>/dt - <(i/hbar)[H, f(t)]> |`
    pub fn ehrenfest_residual(&self, e: &Ensemble, f: &Quantity, t: f64, dt: f64) -> Result<f64> {
        let rate = self.expectation_rate(e, f, t, dt)?;
        let ft = self.heisenberg_evolve(f, t)?;
        Ok((rate - self.bracket_mean(e, &self.hamiltonian, &ft)?).norm())
    }

    /// Ehrenfest residuals for both commutator orders: `([H, f], [f, H])`.
    /// Only the first vanishes under this module's convention.
    pub fn ehrenfest_sign_check(&self, e: &Ensemble, f: &Quantity, t: f64, dt: f64) -> Result<(f64, f64)> {
        let rate = self.expectation_rate(e, f, t, dt)?;
        let ft = self.heisenberg_evolve(f, t)?;
        let h_first = (rate - self.bracket_mean(e, &self.hamiltonian, &ft)?).norm();
        let f_first = (rate - self.bracket_mean(e, &ft, &self.hamiltonian)?).norm();
        Ok((h_first, f_first))
    }

    /// Randomized check of the automorphism axioms and of picture duality.
    pub fn check_automorphism_axioms(
        &self,
        streams: &RngStreams,
        samples: usize,
        tol: &Tolerances,
        exec: Exec,
    ) -> AxiomReport {
        let n = self.dim();
        let rows = exec.map(samples, |i| {
            let mut rng = streams.stream(i as u64);
            let f = random::quantity(&mut rng, Realization::Matrix, n);
            let g = random::quantity(&mut rng, Realization::Matrix, n);
            let alpha = random::complex_normal(&mut rng);
            let s = random::real_scalar(&mut rng);
            let t = random::real_scalar(&mut rng);
            let e = random::ensemble(&mut rng, Realization::Matrix, n);
            let ev = |q: &Quantity, t: f64| self.heisenberg_evolve(q, t).expect("dimension checked");
            let d = |a: &Quantity, b: &Quantity| a.distance(b).expect("compatible");

            let scalar = f.scalar_like(alpha);
            let a1 = d(&ev(&scalar, t), &scalar)
                .max(d(&ev(&f.conjugate(), t), &ev(&f, t).conjugate()))
                .max(d(
                    &ev(&f.add(&g).expect("compatible"), t),
                    &ev(&f, t).add(&ev(&g, t)).expect("compatible"),
                ));
            let a2 = d(
                &ev(&f.mul(&g).expect("compatible"), t),
                &ev(&f, t).mul(&ev(&g, t)).expect("compatible"),
            );
            let a3 = d(&ev(&ev(&f, t), s), &ev(&f, s + t))
                .max(d(&ev(&f, 0.0), &f))
                .max(d(&ev(&ev(&f, t), -t), &f));
            let u = self.propagator(t);
            let unitarity = linalg::spectral_norm(&(&u * u.adjoint() - DMatrix::identity(n, n)));
            let duality = match self.schrodinger_evolve(&e, t) {
                Ok(et) => (e.expectation(&ev(&f, t)).expect("matrix") - et.expectation(&f).expect("matrix")).norm(),
                Err(_) => f64::INFINITY,
            };
            let h = f.re_im().0;
            let spectrum = h
                .hermitian_eigenvalues()
                .iter()
                .zip(ev(&h, t).hermitian_eigenvalues())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            vec![a1, a2, a3, unitarity, duality, spectrum]
        });
        let worst = worst_per_column(&rows, 6);
        let mut report = AxiomReport::new(format!("automorphism axioms, dim {n}"));
        let notes = [
            ("A1", "S_t fixes scalars, commutes with conjugation, additive"),
            ("A2", "S_t(fg) = S_t(f) S_t(g)"),
            ("A3", "S_s S_t = S_{s+t}, S_0 = id"),
            ("unitarity", "||U U* - 1||"),
            ("duality", "<S_t(f)>_E = <f>_{E_t}"),
            ("spectrum", "conjugation preserves eigenvalues"),
        ];
        for ((name, note), w) in notes.iter().zip(worst) {
            report.record(name, w, tol.value_tol, samples, note);
        }
        report
    }
}

fn require_step(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(QcalcError::InvalidParameter(format!("dt must be positive, got {dt}")))
    }
}

/// `S(f) = s f s*` for a unitary `s`.
pub fn scattering_automorphism(s: &Quantity, f: &Quantity, tol: &Tolerances) -> Result<Quantity> {
    s.check_compatible(f)?;
    let residual = s.mul(&s.conjugate())?.distance(&s.identity_like())?;
    if residual > tol.value_tol {
        return Err(QcalcError::NotUnitary { residual });
    }
    s.mul(f)?.mul(&s.conjugate())
}

/// Harmonic oscillator `H = p^2/2 + omega^2 q^2 / 2` with unit mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOscillator {
    pub omega: f64,
    pub q0: f64,
    pub p0: f64,
}

/// A polynomial `sum c q^a p^b` in the phase-space coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhasePolynomial {
    pub terms: Vec<(f64, u32, u32)>,
}

impl PhasePolynomial {
    pub fn new(terms: Vec<(f64, u32, u32)>) -> Self {
        Self { terms }
    }

    pub fn q() -> Self {
        Self::new(vec![(1.0, 1, 0)])
    }

    pub fn p() -> Self {
        Self::new(vec![(1.0, 0, 1)])
    }

    pub fn energy(omega: f64) -> Self {
        Self::new(vec![(0.5, 0, 2), (0.5 * omega * omega, 2, 0)])
    }

    pub fn eval(&self, q: f64, p: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, a, b)| c * q.powi(a as i32) * p.powi(b as i32))
            .sum()
    }

    /// `{f, H} = p df/dq - omega^2 q df/dp`
    pub fn bracket_with_energy(&self, omega: f64) -> Self {
        let mut out = Vec::new();
        for &(c, a, b) in &self.terms {
            if a > 0 {
                out.push((c * a as f64, a - 1, b + 1));
            }
            if b > 0 {
                out.push((-omega * omega * c * b as f64, a + 1, b - 1));
            }
        }
        Self::new(out)
    }
}

impl ClassicalOscillator {
    pub fn new(omega: f64, q0: f64, p0: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(QcalcError::InvalidParameter(format!(
                "omega must be positive, got {omega}"
            )));
        }
        Ok(Self { omega, q0, p0 })
    }

    /// Closed-form phase-space point at time `t`.
    pub fn flow(&self, t: f64) -> (f64, f64) {
        let (s, c) = (self.omega * t).sin_cos();
        (
            self.q0 * c + self.p0 / self.omega * s,
            self.p0 * c - self.omega * self.q0 * s,
        )
    }

    pub fn observable_flow(&self, f: &PhasePolynomial, t: f64) -> f64 {
        let (q, p) = self.flow(t);
        f.eval(q, p)
    }

    /// `| (f(t+dt) - f(t-dt)) / (2 dt) - {f, H}(t) |`
    pub fn liouville_residual(&self, f: &PhasePolynomial, t: f64, dt: f64) -> Result<f64> {
        require_step(dt)?;
        let rate = (self.observable_flow(f, t + dt) - self.observable_flow(f, t - dt)) / (2.0 * dt);
        let (q, p) = self.flow(t);
        Ok((rate - f.bracket_with_energy(self.omega).eval(q, p)).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn spin() -> QuantumDynamics {
        QuantumDynamics::new(pauli(3).unwrap(), 1.0, &Tolerances::default()).unwrap()
    }

    #[test]
    fn precession_closed_form() {
        let d = spin();
        let s1 = pauli(1).unwrap();
        let s2 = pauli(2).unwrap();
        for &t in &[0.0, 0.3, FRAC_PI_4, FRAC_PI_2, 2.0] {
            let oracle = s1
                .scale_real((2.0 * t).cos())
                .sub(&s2.scale_real((2.0 * t).sin()))
                .unwrap();
            let ft = d.heisenberg_evolve(&s1, t).unwrap();
            assert!(ft.distance(&oracle).unwrap() < 1e-14);
            assert!(ft.square().distance(&ft.identity_like()).unwrap() < 1e-14);
        }
        assert!(
            d.heisenberg_evolve(&s1, FRAC_PI_4)
                .unwrap()
                .distance(&s2.neg())
                .unwrap()
                < 1e-14
        );
        assert_eq!(d.heisenberg_evolve(&s1, 0.0).unwrap(), s1);
    }

    #[test]
    fn conserved_quantities_do_not_move() {
        let d = spin();
        let s3 = pauli(3).unwrap();
        assert!(d.heisenberg_evolve(&s3, 1.7).unwrap().distance(&s3).unwrap() < 1e-15);
        assert!(d.heisenberg_residual(&s3, 0.4, 1e-4).unwrap() < 1e-10);
    }

    #[test]
    fn residuals_are_second_order() {
        let d = spin();
        let s1 = pauli(1).unwrap();
        let (r1, r2) = (
            d.heisenberg_residual(&s1, 0.3, 1e-4).unwrap(),
            d.heisenberg_residual(&s1, 0.3, 5e-5).unwrap(),
        );
        assert!(r1 <= 1e-6);
        let ratio = r2 / r1;
        assert!((0.2..=0.3).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn ehrenfest_sign() {
        let d = spin();
        let plus = Ensemble::pure(DVector::from_vec(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)])).unwrap();
        let s1 = pauli(1).unwrap();
        let t = 0.3;
        let mean = plus.expectation(&d.heisenberg_evolve(&s1, t).unwrap()).unwrap().re;
        assert!((mean - (2.0 * t).cos()).abs() < 1e-14);
        let (h_first, f_first) = d.ehrenfest_sign_check(&plus, &s1, t, 1e-4).unwrap();
        assert!(h_first <= 1e-6);
        // The reversed order is off by twice the true rate 2 sin(2t).
        assert!((f_first - 4.0 * (2.0 * t).sin()).abs() < 1e-6);
    }

    #[test]
    fn thermal_state_is_stationary() {
        let tol = Tolerances::default();
        let h = Quantity::matrix_real(2, &[1.0, 0.5, 0.5, -0.3]).unwrap();
        let d = QuantumDynamics::new(h.clone(), 1.0, &tol).unwrap();
        let g = Ensemble::gibbs(&h, 0.8).unwrap();
        let later = d.schrodinger_evolve(&g, 2.5).unwrap();
        let diff = &later.density_matrix() - g.density_matrix();
        assert!(linalg::spectral_norm(&diff) < 1e-13);
        assert!(d.von_neumann_residual(&g, 0.2, 1e-4).unwrap() < 1e-10);
    }

    #[test]
    fn automorphism_axioms_pass() {
        let tol = Tolerances::default();
        let streams = RngStreams::new(31, "dyn");
        let h = random::hermitian(&mut streams.stream(1000), Realization::Matrix, 3);
        let d = QuantumDynamics::new(h, 1.0, &tol).unwrap();
        let report = d.check_automorphism_axioms(&streams, 100, &tol, Exec::Parallel);
        assert!(report.all_passed(), "{report:#?}");
    }

    #[test]
    fn scattering_rotates_sigma_one() {
        let tol = Tolerances::default();
        let theta = 0.37;
        let s = Quantity::diagonal(&[C64::new(0.0, theta).exp(), C64::new(0.0, -theta).exp()]).unwrap();
        let s1 = pauli(1).unwrap();
        let out = scattering_automorphism(&s, &s1, &tol).unwrap();
        let oracle = s1
            .scale_real((2.0 * theta).cos())
            .sub(&pauli(2).unwrap().scale_real((2.0 * theta).sin()))
            .unwrap();
        assert!(out.distance(&oracle).unwrap() < 1e-15);
        assert_eq!(scattering_automorphism(&s1.identity_like(), &s1, &tol).unwrap(), s1);
        assert!(matches!(
            scattering_automorphism(&s1.scale_real(2.0), &s1, &tol),
            Err(QcalcError::NotUnitary { .. })
        ));
    }

    #[test]
    fn oscillator_flow() {
        let osc = ClassicalOscillator::new(1.7, 0.4, -1.1).unwrap();
        let (q, p) = osc.flow(2.0 * PI / osc.omega);
        assert!((q - 0.4).abs() < 1e-14 && (p + 1.1).abs() < 1e-14);
        let energy = PhasePolynomial::energy(osc.omega);
        let e0 = energy.eval(0.4, -1.1);
        for k in 0..20 {
            assert!((osc.observable_flow(&energy, k as f64 * 0.37) - e0).abs() < 1e-12);
        }
        assert!(osc.liouville_residual(&PhasePolynomial::q(), 0.9, 1e-4).unwrap() <= 1e-8);
        let qp = PhasePolynomial::new(vec![(1.0, 1, 1)]);
        let q2 = PhasePolynomial::new(vec![(1.0, 2, 0)]);
        for f in [PhasePolynomial::p(), qp, q2] {
            assert!(osc.liouville_residual(&f, 0.9, 1e-4).unwrap() <= 1e-7);
        }
    }
}
