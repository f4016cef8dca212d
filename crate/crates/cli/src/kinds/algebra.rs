use nalgebra::DVector;
use qcalc_core::algebra::axioms::{check_q_axioms, check_q_axioms_with, AxiomCheckConfig, InjectedFault};
use qcalc_core::algebra::complementarity::{complementarity_gamma, GridSearch};
use qcalc_core::ensembles::axioms::check_e_axioms;
use qcalc_core::ensembles::EnsembleForm;
use qcalc_core::{pauli, random, truncated_oscillator, AxiomReport, CheckStatus, Ensemble, Exec, Realization};

use super::{parse_realizations, realization_name, require_positive};
use crate::error::Result;
use crate::report::{Provenance, Row};
use crate::scenario::Context;

fn axiom_rows(prefix: &str, report: &AxiomReport) -> Vec<Row> {
    report
        .entries
        .iter()
        .filter(|e| e.status != CheckStatus::Skipped)
        .map(|e| {
            Row::at_most(
                format!("{prefix} {}", e.name),
                e.worst_residual,
                0.0,
                Provenance::Paper,
                e.tolerance,
            )
        })
        .collect()
}

fn ensembles_for(ctx: &Context, r: Realization, n: usize) -> Result<Vec<Ensemble>> {
    let mut rng = ctx.streams.derive("ensembles").stream(r as u64);
    Ok(match r {
        Realization::Classical => vec![Ensemble::weights(random::weights(&mut rng, n))?],
        Realization::Matrix => {
            let s = random::hermitian(&mut rng, r, n);
            vec![
                Ensemble::pure(random::unit_vector(&mut rng, n))?,
                Ensemble::density(random::density_matrix(&mut rng, n))?,
                Ensemble::gibbs(&s, 1.0)?,
            ]
        }
    })
}

/// Randomized Q- and E-axiom checks, plus fault-injection sanity rows.
pub(super) fn axiom_check(ctx: &Context) -> Result<Vec<Row>> {
    let realizations = parse_realizations(&ctx.params.get("realization", "both".to_string())?)?;
    let dim = require_positive("dim", ctx.params.get("dim", 3usize)?)?;
    let samples = require_positive("samples", ctx.params.get("samples", 100usize)?)?;
    let faults = ctx.params.get("faults", true)?;
    let tol = &ctx.tol;
    let q_streams = ctx.streams.derive("q-axioms");
    let e_streams = ctx.streams.derive("e-axioms");
    let config = |realization| AxiomCheckConfig {
        realization,
        dim,
        samples,
        exec: Exec::Parallel,
    };

    let mut rows = Vec::new();
    for &r in &realizations {
        let name = realization_name(r);
        rows.extend(axiom_rows(name, &check_q_axioms(&q_streams, &config(r), tol)));
        for e in ensembles_for(ctx, r, dim)? {
            let report = check_e_axioms(&e, &e_streams, samples, tol, Exec::Parallel);
            rows.extend(axiom_rows(&format!("{name} {}", e.form_name()), &report));
        }
    }
    if faults {
        let r = realizations[realizations.len() - 1];
        let flagged = |fault: InjectedFault, axiom: &str| {
            check_q_axioms_with(&fault, &q_streams, &config(r), tol).status(axiom) == Some(CheckStatus::Fail)
        };
        rows.push(Row::flag(
            "fault: transpose-only conjugation flagged by Q4",
            flagged(InjectedFault::TransposeOnlyConjugate, "Q4"),
            true,
            Provenance::Derived,
        ));
        rows.push(Row::flag(
            "fault: reversed order flagged by Q9",
            flagged(InjectedFault::ReversedOrder, "Q9"),
            true,
            Provenance::Derived,
        ));
        let mut w = vec![0.0; dim.max(3)];
        w[0] = 0.6;
        w[1] = 0.5;
        w[2] = -0.1;
        let bad = Ensemble::new_unchecked(EnsembleForm::Weights(DVector::from_vec(w)));
        let report = check_e_axioms(&bad, &e_streams, samples, tol, Exec::Parallel);
        rows.push(Row::flag(
            "fault: negative weight flagged by E3",
            report.status("E3") == Some(CheckStatus::Fail),
            true,
            Provenance::Derived,
        ));
    }
    Ok(rows)
}

/// Complementarity constant of the Pauli pair, commuting classical pairs and
/// the truncated oscillator.
pub(super) fn complementarity(ctx: &Context) -> Result<Vec<Row>> {
    let search = GridSearch {
        points: ctx.params.get("points", GridSearch::default().points)?,
        starts: ctx.params.get("starts", GridSearch::default().starts)?,
        max_sweeps: ctx.params.get("max_sweeps", GridSearch::default().max_sweeps)?,
    };
    let pairs = require_positive("classical_pairs", ctx.params.get("classical_pairs", 20usize)?)?;
    let dim = require_positive("classical_dim", ctx.params.get("classical_dim", 3usize)?)?;
    let levels: usize = ctx.params.get("oscillator_levels", 20usize)?;
    let tol = &ctx.tol;

    let pauli_pair = complementarity_gamma(&pauli(1)?, &pauli(3)?, &search, tol)?;
    let (s1, s3) = pauli_pair.argmin;
    let streams = ctx.streams.derive("classical-pairs");
    let classical = Exec::Parallel
        .map(pairs, |i| {
            let mut rng = streams.stream(i as u64);
            let f = random::hermitian(&mut rng, Realization::Classical, dim);
            let g = random::hermitian(&mut rng, Realization::Classical, dim);
            complementarity_gamma(&f, &g, &search, tol).map(|e| e.gamma)
        })
        .into_iter()
        .collect::<qcalc_core::Result<Vec<f64>>>()?;
    let worst_classical = classical.into_iter().fold(0.0, f64::max);
    let (q, p) = truncated_oscillator(levels, 1.0)?;
    let oscillator = complementarity_gamma(&q, &p, &search, tol)?;

    Ok(vec![
        Row::equal("gamma(s1, s3)", pauli_pair.gamma, 1.0, Provenance::Paper, 1e-6),
        Row::equal(
            "x^2 + y^2 at the minimizer",
            s1 * s1 + s3 * s3,
            1.0,
            Provenance::Derived,
            1e-4,
        ),
        Row::at_most(
            "max gamma, commuting classical pairs",
            worst_classical,
            0.0,
            Provenance::Paper,
            1e-6,
        ),
        Row::at_least(
            format!("gamma(q, p), truncated oscillator n={levels}, hbar=1"),
            oscillator.gamma,
            0.9,
            Provenance::Derived,
            0.0,
        ),
    ])
}
