use nalgebra::DVector;

use qcalc_core::effects::{
    pairwise_independent_events, probability, product_events, relative_frequency_stats, transition_probability,
    validate_effect, EffectView,
};
use qcalc_core::{identity, pauli, random, truncated_oscillator, Ensemble, Exec, Quantity, Realization, C64};

use super::require_positive;
use crate::error::Result;
use crate::report::{Provenance, Row};
use crate::scenario::Context;

/// Robertson-Schroedinger residual over random pairs, and the oscillator
/// ground state where the bound is attained.
pub(super) fn uncertainty(ctx: &Context) -> Result<Vec<Row>> {
    let trials = require_positive("trials", ctx.params.get("trials", 1000usize)?)?;
    let dim = require_positive("dim", ctx.params.get("dim", 3usize)?)?;
    let hbar: f64 = ctx.params.get("hbar", 1.0)?;
    let levels: usize = ctx.params.get("oscillator_levels", 20)?;
    let streams = ctx.streams.derive("uncertainty");

    // Residuals are compared relative to sigma(f)^2 sigma(g)^2.
    let residuals = Exec::Parallel
        .map(trials, |i| {
            let mut rng = streams.stream(i as u64);
            let r = if i % 2 == 0 {
                Realization::Classical
            } else {
                Realization::Matrix
            };
            let f = random::hermitian(&mut rng, r, dim);
            let g = random::hermitian(&mut rng, r, dim);
            let e = random::ensemble(&mut rng, r, dim);
            let m = e.moments(&f, &g)?;
            let scale = 1.0 + (m.sigma_f * m.sigma_g).powi(2);
            Ok(e.uncertainty_residual(&f, &g)? / scale)
        })
        .into_iter()
        .collect::<qcalc_core::Result<Vec<f64>>>()?;
    let worst = residuals.into_iter().fold(f64::INFINITY, f64::min);

    let (q, p) = truncated_oscillator(levels, hbar)?;
    let mut ground = DVector::zeros(levels);
    ground[0] = C64::new(1.0, 0.0);
    let e = Ensemble::pure(ground)?;
    let product = e.sigma(&q)? * e.sigma(&p)?;
    let v = ctx.tol.value_tol;
    Ok(vec![
        Row::at_least(
            format!("min scaled residual over {trials} random pairs"),
            worst,
            0.0,
            Provenance::Paper,
            v,
        ),
        Row::equal(
            "sigma(q) sigma(p), oscillator ground state",
            product,
            hbar / 2.0,
            Provenance::Paper,
            v,
        ),
        Row::equal(
            "residual, oscillator ground state",
            e.uncertainty_residual(&q, &p)?,
            0.0,
            Provenance::Derived,
            v,
        ),
    ])
}

/// `sigma_l` acting on site `l` of an `n`-site chain.
fn site_operator(op: &Quantity, site: usize, n: usize) -> Result<Quantity> {
    let one = identity(Realization::Matrix, op.dim());
    let mut out = if site == 0 { op.clone() } else { one.clone() };
    for l in 1..n {
        out = out.tensor(if l == site { op } else { &one })?;
    }
    Ok(out)
}

/// Relative frequencies of pairwise independent events and the mean of
/// independent spins.
pub(super) fn weak_law(ctx: &Context) -> Result<Vec<Row>> {
    let events_used = require_positive("events", ctx.params.get("events", 100usize)?)?;
    let sites = require_positive("sites", ctx.params.get("sites", 6usize)?)?;
    let tol = &ctx.tol;
    let v = tol.value_tol;

    let (e, events) = pairwise_independent_events(2, 7, &[1])?;
    let n = events_used.min(events.len());
    let stats = relative_frequency_stats(&e, &events[..n], tol)?;
    let (e5, events5) = pairwise_independent_events(5, 3, &[1])?;
    let stats5 = relative_frequency_stats(&e5, &events5[..25], tol)?;
    let (e_prod, events_prod) = product_events(0.3, 12)?;
    let stats_prod = relative_frequency_stats(&e_prod, &events_prod, tol)?;
    let as_quantities = |evs: &[EffectView]| evs.iter().map(|x| x.quantity().clone()).collect::<Vec<_>>();
    let law = e_prod.weak_law_stats(&as_quantities(&events_prod))?;

    let s3 = pauli(3)?;
    let chain = (0..sites)
        .map(|l| site_operator(&s3, l, sites))
        .collect::<Result<Vec<_>>>()?;
    let amp = C64::new((1.0 / (1usize << sites) as f64).sqrt(), 0.0);
    let plus = Ensemble::pure(DVector::from_element(1 << sites, amp))?;
    let spins = plus.weak_law_stats(&chain)?;

    let mut rows = vec![
        Row::equal(
            format!("F_2^7: sigma(q), N={n}"),
            stats.sigma_q,
            0.5 / (n as f64).sqrt(),
            Provenance::Paper,
            1e-12,
        ),
        Row::equal("F_2^7: <q>", stats.p, 0.5, Provenance::Derived, v),
        Row::equal(
            "F_2^7: sigma(q) / sqrt(p(1-p)/N)",
            stats.sigma_q / stats.predicted_sigma,
            1.0,
            Provenance::Derived,
            v,
        ),
        Row::equal(
            "F_5^3: sigma(q), N=25",
            stats5.sigma_q,
            0.08,
            Provenance::Derived,
            1e-12,
        ),
        Row::equal(
            "product events: sigma(q), N=12, p=0.3",
            stats_prod.sigma_q,
            (0.21f64 / 12.0).sqrt(),
            Provenance::Derived,
            1e-12,
        ),
        Row::equal(
            "product events: sigma(mean) sqrt(N) / sigma",
            law.sigma_of_mean * (law.n as f64).sqrt() / law.member_sigma,
            1.0,
            Provenance::Paper,
            v,
        ),
        Row::equal(
            format!("spin chain, {sites} sites: sigma(mean) sqrt(N) / sigma"),
            spins.sigma_of_mean * (spins.n as f64).sqrt() / spins.member_sigma,
            1.0,
            Provenance::Derived,
            v,
        ),
        Row::at_most(
            "spin chain: max cross covariance",
            spins.max_cross_covariance,
            0.0,
            Provenance::Derived,
            v,
        ),
    ];
    if n == 127 {
        rows.push(Row::equal(
            "F_2^7: events available",
            events.len() as f64,
            127.0,
            Provenance::Trivial,
            0.0,
        ));
    }
    Ok(rows)
}

/// Effect algebra on explicit qubit examples and random commuting effects.
pub(super) fn effects(ctx: &Context) -> Result<Vec<Row>> {
    let trials = require_positive("trials", ctx.params.get("trials", 200usize)?)?;
    let dim = require_positive("dim", ctx.params.get("dim", 4usize)?)?;
    let tol = &ctx.tol;
    let v = tol.value_tol;
    let r2 = std::f64::consts::SQRT_2;

    let e0 = Quantity::matrix_real(2, &[1.0, 0.0, 0.0, 0.0])?;
    let e_plus = Quantity::matrix_real(2, &[0.5, 0.5, 0.5, 0.5])?;
    let sym = e0.mul(&e_plus)?.add(&e_plus.mul(&e0)?)?.scale_real(0.5);
    let quarter = Quantity::matrix_real(2, &[0.5, 0.25, 0.25, 0.0])?;
    let eig = sym.hermitian_eigenvalues();
    let rejected = validate_effect(&sym, tol).is_err();

    let streams = ctx.streams.derive("commuting-effects");
    let outcomes = Exec::Parallel
        .map(trials, |i| {
            let mut rng = streams.stream(i as u64);
            let draw = |rng: &mut _| {
                let x = random::nonnegative(rng, Realization::Classical, dim);
                let top = x.spectral_norm().max(1.0);
                validate_effect(&x.scale_real(1.0 / top), tol)
            };
            let a = draw(&mut rng)?;
            let b = draw(&mut rng)?;
            let ens = random::ensemble(&mut rng, Realization::Classical, dim);
            let (and, or) = a.and_or(&b, tol)?;
            let p = |x: &EffectView| probability(&ens, x);
            let gap = (p(&or)? + p(&and)? - p(&a)? - p(&b)?).abs();
            let out_of_range = [p(&a)?, p(&b)?, p(&and)?, p(&or)?]
                .into_iter()
                .map(|x| (-x).max(x - 1.0).max(0.0))
                .fold(0.0, f64::max);
            Ok((gap, out_of_range))
        })
        .into_iter()
        .collect::<qcalc_core::Result<Vec<(f64, f64)>>>()?;
    let (worst_gap, worst_range) = outcomes
        .into_iter()
        .fold((0.0, 0.0), |(g, r), (a, b)| (f64::max(g, a), f64::max(r, b)));

    let ket0 = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    let ket_plus = DVector::from_element(2, C64::new(1.0 / r2, 0.0));
    Ok(vec![
        Row::equal(
            "symmetrized product vs (1/4)[[2,1],[1,0]]",
            sym.distance(&quarter)?,
            0.0,
            Provenance::Derived,
            v,
        ),
        Row::equal(
            "min eigenvalue of (e e' + e' e)/2",
            eig[0],
            (1.0 - r2) / 4.0,
            Provenance::Paper,
            v,
        ),
        Row::equal(
            "max eigenvalue of (e e' + e' e)/2",
            eig[1],
            (1.0 + r2) / 4.0,
            Provenance::Derived,
            v,
        ),
        Row::flag(
            "symmetrized product rejected as an effect",
            rejected,
            true,
            Provenance::Paper,
        ),
        Row::at_most(
            format!("inclusion-exclusion gap, {trials} commuting pairs"),
            worst_gap,
            0.0,
            Provenance::Paper,
            v,
        ),
        Row::at_most("probabilities outside [0, 1]", worst_range, 0.0, Provenance::Paper, v),
        Row::equal(
            "|<0|+>|^2",
            transition_probability(&ket0, &ket_plus, tol)?,
            0.5,
            Provenance::Derived,
            v,
        ),
    ])
}
