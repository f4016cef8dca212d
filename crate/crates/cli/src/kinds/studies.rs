use qcalc_core::experiments::{hydrogen_case_study, macroscopic_reference, moon_case_study, young_measure_demo};

use crate::error::{CliError, Result};
use crate::report::{Provenance, Row};
use crate::scenario::Context;

pub(super) fn hydrogen(ctx: &Context) -> Result<Vec<Row>> {
    let n_quad: usize = ctx.params.get("n_quad", 1000)?;
    let study = hydrogen_case_study(n_quad)?;
    Ok(vec![
        Row::equal("normalization", study.normalization, 1.0, Provenance::Derived, 1e-9),
        Row::relative("<r> / a0", study.mean_r, 1.5, Provenance::Paper, 1e-6),
        Row::relative("Delta q / a0", study.delta_q, 3f64.sqrt(), Provenance::Paper, 1e-6),
    ])
}

pub(super) fn moon(ctx: &Context) -> Result<Vec<Row>> {
    let m_moon: f64 = ctx.params.get("m_moon", 7.35e22)?;
    let factor: f64 = ctx.params.get("atom_mass_factor", 20.0)?;
    let m_p: f64 = ctx.params.get("m_p", 1.67e-27)?;
    let r0: f64 = ctx.params.get("r0", 5.29e-11)?;
    let study = moon_case_study(m_moon, factor, m_p, r0)?;
    Ok(vec![
        Row::relative("N", study.n_atoms, 2.20e48, Provenance::Paper, 5e-3),
        Row::relative("sigma_com (m)", study.sigma_com, 3.567e-35, Provenance::Paper, 2e-3),
        Row::equal(
            "sigma_com sqrt(N) / r0",
            study.sigma_com * study.n_atoms.sqrt() / r0,
            1.0,
            Provenance::Trivial,
            1e-12,
        ),
    ])
}

/// Oscillating sequence `f_k` in {alpha, beta}: the means converge but the
/// limit of the squares is not the square of the limit.
pub(super) fn young_measure(ctx: &Context) -> Result<Vec<Row>> {
    let alpha: f64 = ctx.params.get("alpha", 0.0)?;
    let beta: f64 = ctx.params.get("beta", 1.0)?;
    let k: u64 = ctx.params.get("k", 1000)?;
    if k == 0 {
        return Err(CliError::Param("k must be positive".into()));
    }
    let y = young_measure_demo(alpha, beta, k)?;
    let limit = (alpha + beta) / 2.0;
    let limit_sq = (alpha * alpha + beta * beta) / 2.0;
    let kf = k as f64;
    let spread = |lo: f64, hi: f64, centre: f64, label: &str, computed: f64| {
        let half = (hi - lo).abs() / (2.0 * kf);
        Row::within(label, computed, centre - half, centre + half, Provenance::Derived)
    };
    let spread_k = y.mean_sq - y.mean * y.mean;
    let masses = [1.0, 1.0];
    let spins = macroscopic_reference(&masses, &[1.0, 1.0])? - macroscopic_reference(&masses, &[-1.0, 1.0])?.powi(2);
    let gap = ((alpha - beta) / 2.0).powi(2);
    Ok(vec![
        spread(alpha, beta, limit, "int f_k", y.mean),
        spread(alpha * alpha, beta * beta, limit_sq, "int f_k^2", y.mean_sq),
        Row::equal(
            "lim int f_k^2 - (lim int f_k)^2",
            limit_sq - limit * limit,
            gap,
            Provenance::Paper,
            ctx.tol.value_tol,
        ),
        Row::equal(
            "(int f_k^2 - (int f_k)^2) / ((alpha - beta)/2)^2",
            spread_k / gap,
            1.0,
            Provenance::Derived,
            1.0 / kf,
        ),
        Row::equal(
            "v_mac(f^2) - v_mac(f)^2, values -1 and 1",
            spins,
            1.0,
            Provenance::Derived,
            ctx.tol.value_tol,
        ),
    ])
}
