use nalgebra::DVector;

use qcalc_core::dynamics::{scattering_automorphism, ClassicalOscillator, PhasePolynomial, QuantumDynamics};
use qcalc_core::{pauli, random, Ensemble, Exec, Quantity, Realization, C64};

use super::require_positive;
use crate::error::Result;
use crate::report::{Provenance, Row};
use crate::scenario::Context;

/// Second-order finite differences shrink by about 4 when the step halves.
const RICHARDSON: (f64, f64) = (0.2, 0.3);

fn richardson_row(label: &str, residual: impl Fn(f64) -> qcalc_core::Result<f64>, dt: f64) -> Result<Row> {
    let ratio = residual(dt / 2.0)? / residual(dt)?;
    Ok(Row::within(
        format!("{label}: residual ratio at dt/2"),
        ratio,
        RICHARDSON.0,
        RICHARDSON.1,
        Provenance::Derived,
    ))
}

/// Heisenberg and Schroedinger pictures for a random Hamiltonian, the spin
/// precession example, a scattering rotation and the classical oscillator.
pub(super) fn dynamics(ctx: &Context) -> Result<Vec<Row>> {
    let samples = require_positive("samples", ctx.params.get("samples", 100usize)?)?;
    let dim = require_positive("dim", ctx.params.get("dim", 3usize)?)?;
    let t: f64 = ctx.params.get("t", 0.3)?;
    let dt: f64 = ctx.params.get("dt", 1e-4)?;
    let hbar: f64 = ctx.params.get("hbar", 1.0)?;
    let theta: f64 = ctx.params.get("theta", 0.37)?;
    let omega: f64 = ctx.params.get("omega", 1.0)?;
    let tol = &ctx.tol;
    let v = tol.value_tol;
    const FD_TOL: f64 = 1e-6;

    let mut rng = ctx.streams.derive("system").stream(0);
    let h = random::hermitian(&mut rng, Realization::Matrix, dim);
    let sys = QuantumDynamics::new(h, hbar, tol)?;
    let f = random::hermitian(&mut rng, Realization::Matrix, dim);
    let rho = random::ensemble(&mut rng, Realization::Matrix, dim);

    let mut rows: Vec<Row> = sys
        .check_automorphism_axioms(&ctx.streams.derive("automorphism"), samples, tol, Exec::Parallel)
        .entries
        .iter()
        .map(|e| {
            Row::at_most(
                format!("automorphism {}", e.name),
                e.worst_residual,
                0.0,
                Provenance::Paper,
                e.tolerance,
            )
        })
        .collect();

    rows.push(Row::at_most(
        "Heisenberg residual",
        sys.heisenberg_residual(&f, t, dt)?,
        0.0,
        Provenance::Paper,
        FD_TOL,
    ));
    rows.push(Row::at_most(
        "von Neumann residual",
        sys.von_neumann_residual(&rho, t, dt)?,
        0.0,
        Provenance::Paper,
        FD_TOL,
    ));
    rows.push(Row::at_most(
        "Ehrenfest residual",
        sys.ehrenfest_residual(&rho, &f, t, dt)?,
        0.0,
        Provenance::Paper,
        FD_TOL,
    ));
    rows.push(richardson_row("Heisenberg", |s| sys.heisenberg_residual(&f, t, s), dt)?);
    rows.push(richardson_row(
        "von Neumann",
        |s| sys.von_neumann_residual(&rho, t, s),
        dt,
    )?);
    rows.push(richardson_row(
        "Ehrenfest",
        |s| sys.ehrenfest_residual(&rho, &f, t, s),
        dt,
    )?);

    let (s1, s2, s3) = (pauli(1)?, pauli(2)?, pauli(3)?);
    let spin = QuantumDynamics::new(s3.clone(), 1.0, tol)?;
    let plus = Ensemble::pure(DVector::from_element(2, C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)))?;
    let (h_first, f_first) = spin.ehrenfest_sign_check(&plus, &s1, theta, dt)?;
    let at_quarter = spin.heisenberg_evolve(&s1, std::f64::consts::FRAC_PI_4)?;
    let mean = plus.expectation(&spin.heisenberg_evolve(&s1, theta)?)?.re;
    rows.extend([
        Row::at_most(
            "spin: Ehrenfest residual, (i/hbar)[H, f]",
            h_first,
            0.0,
            Provenance::Derived,
            FD_TOL,
        ),
        Row::equal(
            "spin: Ehrenfest residual, (i/hbar)[f, H]",
            f_first,
            4.0 * (2.0 * theta).sin().abs(),
            Provenance::Derived,
            FD_TOL,
        ),
        Row::equal(
            "spin: ||S_{pi/4}(s1) + s2||",
            at_quarter.distance(&s2.neg())?,
            0.0,
            Provenance::Derived,
            v,
        ),
        Row::equal(
            "spin: <s1(t)> in (1,1)/sqrt 2",
            mean,
            (2.0 * theta).cos(),
            Provenance::Derived,
            v,
        ),
    ]);

    let phase = |sign: f64| C64::from_polar(1.0, sign * theta / 2.0);
    let rotation = Quantity::diagonal(&[phase(-1.0), phase(1.0)])?;
    let rotated = scattering_automorphism(&rotation, &s1, tol)?;
    let target = s1.scale_real(theta.cos()).add(&s2.scale_real(theta.sin()))?;
    let not_unitary = scattering_automorphism(&s1.scale_real(2.0), &s1, tol).is_err();
    rows.push(Row::equal(
        "scattering: s s1 s* vs cos(theta) s1 + sin(theta) s2",
        rotated.distance(&target)?,
        0.0,
        Provenance::Derived,
        v,
    ));
    rows.push(Row::flag(
        "scattering: non-unitary s rejected",
        not_unitary,
        true,
        Provenance::Trivial,
    ));

    let osc = ClassicalOscillator::new(omega, 1.0, 0.5)?;
    let energy = PhasePolynomial::energy(omega);
    let e0 = osc.observable_flow(&energy, 0.0);
    let drift = (0..=100)
        .map(|k| (osc.observable_flow(&energy, 0.1 * k as f64) - e0).abs())
        .fold(0.0, f64::max);
    rows.push(Row::at_most(
        "oscillator: energy drift over t in [0, 10]",
        drift / e0,
        0.0,
        Provenance::Derived,
        v,
    ));
    let observables = [
        ("q", PhasePolynomial::q()),
        ("p", PhasePolynomial::p()),
        ("q^2 p", PhasePolynomial::new(vec![(1.0, 2, 1)])),
    ];
    for (name, obs) in &observables {
        rows.push(Row::at_most(
            format!("oscillator: Liouville residual for {name}"),
            osc.liouville_residual(obs, t, dt)?,
            0.0,
            Provenance::Derived,
            FD_TOL,
        ));
    }
    Ok(rows)
}
