//! Macroscopic reference values, the Young-measure oscillation, the
//! measurement-uncertainty bound for consistent experiments, and two
//! worked case studies (hydrogen ground state and the Moon's center of mass).

use serde::Serialize;

use super::Experiment;
use crate::algebra::Quantity;
use crate::error::{QcalcError, Result};
use crate::tolerances::Tolerances;

/// Mass-weighted average `sum m_a f_a / sum m_a`.
pub fn macroscopic_reference(masses: &[f64], values: &[f64]) -> Result<f64> {
    if masses.len() != values.len() {
        return Err(QcalcError::LengthMismatch {
            left: masses.len(),
            right: values.len(),
        });
    }
    if masses.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
        return Err(QcalcError::InvalidParameter("masses must be positive".into()));
    }
    let total: f64 = masses.iter().sum();
    Ok(masses.iter().zip(values).map(|(m, f)| m * f).sum::<f64>() / total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YoungMeasure {
    pub mean: f64,
    pub mean_sq: f64,
}

/// Exact integrals over `[0, 1]` of `f_k` and `f_k^2`, where `f_k(x) = alpha`
/// if `floor(k x)` is even and `beta` otherwise.
pub fn young_measure_demo(alpha: f64, beta: f64, k: u64) -> Result<YoungMeasure> {
    if k == 0 {
        return Err(QcalcError::InvalidParameter("k must be positive".into()));
    }
    let even = k.div_ceil(2) as f64;
    let odd = (k / 2) as f64;
    let k = k as f64;
    Ok(YoungMeasure {
        mean: (even * alpha + odd * beta) / k,
        mean_sq: (even * alpha * alpha + odd * beta * beta) / k,
    })
}

/// `Df Dg - |v(fg) - v(f) v(g)|` with `Df = sqrt(v(f^2) - v(f)^2)`; nonnegative
/// for consistent experiments and commuting Hermitian `f, g`.
pub fn consistency_bound_check(v: &Experiment, f: &Quantity, g: &Quantity, tol: &Tolerances) -> Result<f64> {
    f.require_hermitian(tol)?;
    g.require_hermitian(tol)?;
    let residual = f.commutator(g)?.spectral_norm();
    if residual > tol.commute_tol * f.spectral_norm() * g.spectral_norm() {
        return Err(QcalcError::NonCommuting { residual });
    }
    let vf = v.require(f, 0, tol)?.re;
    let vg = v.require(g, 1, tol)?.re;
    let spread = |q: &Quantity, mean: f64, index: usize| -> Result<f64> {
        Ok((v.require(&q.square(), index, tol)?.re - mean * mean).max(0.0).sqrt())
    };
    let df = spread(f, vf, 0)?;
    let dg = spread(g, vg, 1)?;
    let vfg = v.require(&f.mul(g)?, 2, tol)?.re;
    Ok(df * dg - (vfg - vf * vg).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HydrogenStudy {
    /// `int p(r) dr` before renormalization.
    pub normalization: f64,
    /// `<r>` in units of the Bohr radius.
    pub mean_r: f64,
    /// `sqrt(<r^2>)` in units of the Bohr radius.
    pub delta_q: f64,
}

/// Radial moments of the hydrogen ground state, `p(r) = 4 r^2 exp(-2r)`.
///
/// Composite Simpson on `u in [0, 1]` with `r(u) = R (e^{a u} - 1) / (e^a - 1)`,
/// `R = 40`, `a = 5`, which concentrates nodes near the origin.
pub fn hydrogen_case_study(n_quad: usize) -> Result<HydrogenStudy> {
    if n_quad < 100 {
        return Err(QcalcError::InvalidParameter(format!(
            "n_quad must be at least 100, got {n_quad}"
        )));
    }
    const CUTOFF: f64 = 40.0;
    const GRADING: f64 = 5.0;
    let n = n_quad + n_quad % 2;
    let denom = GRADING.exp_m1();
    let h = 1.0 / n as f64;
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for i in 0..=n {
        let u = i as f64 * h;
        let r = CUTOFF * (GRADING * u).exp_m1() / denom;
        let jac = CUTOFF * GRADING * (GRADING * u).exp() / denom;
        let weight = match i {
            0 => 1.0,
            i if i == n => 1.0,
            i if i % 2 == 1 => 4.0,
            _ => 2.0,
        } * h
            / 3.0;
        let p = 4.0 * r * r * (-2.0 * r).exp() * jac * weight;
        m0 += p;
        m1 += p * r;
        m2 += p * r * r;
    }
    Ok(HydrogenStudy {
        normalization: m0,
        mean_r: m1 / m0,
        delta_q: (m2 / m0).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoonStudy {
    /// Number of atoms.
    pub n_atoms: f64,
    /// Center-of-mass position uncertainty `r0 / sqrt(N)` in meters.
    pub sigma_com: f64,
}

/// `N = m_moon / (factor m_p)` and `sigma_com = r0 / sqrt(N)`.
pub fn moon_case_study(m_moon: f64, atom_mass_factor: f64, m_p: f64, r0: f64) -> Result<MoonStudy> {
    if [m_moon, atom_mass_factor, m_p, r0]
        .iter()
        .any(|&x| !(x > 0.0 && x.is_finite()))
    {
        return Err(QcalcError::InvalidParameter(
            "case-study inputs must be positive".into(),
        ));
    }
    let n_atoms = m_moon / (atom_mass_factor * m_p);
    Ok(MoonStudy {
        n_atoms,
        sigma_com: r0 / n_atoms.sqrt(),
    })
}
