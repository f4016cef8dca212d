use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use qcalc_core::experiments::kochen_specker_search;
use qcalc_core::nonlocality::{chsh_value, spin_pair_example, tsirelson_fuzz, FuzzConfig};
use qcalc_core::{Ensemble, Exec, Realization};

use crate::error::Result;
use crate::report::{Provenance, Row};
use crate::scenario::Context;

/// Spin-pair correlators and CHSH value, with optional random searches for
/// the largest quantum and classical CHSH values.
pub(super) fn chsh(ctx: &Context) -> Result<Vec<Row>> {
    let fuzz_trials: usize = ctx.params.get("fuzz_trials", 0)?;
    let classical_trials: usize = ctx.params.get("classical_trials", 0)?;
    let factor_dim: usize = ctx.params.get("factor_dim", 2)?;
    let tol = &ctx.tol;

    let (quad, psi) = spin_pair_example();
    let e = Ensemble::pure(psi)?;
    let [c12, c32, c34, c14] = quad.correlators(&e)?;
    let value = chsh_value(&e, &quad)?;
    let v = tol.value_tol;
    let mut rows = vec![
        Row::equal("<f1 f2>", c12, FRAC_1_SQRT_2, Provenance::Paper, v),
        Row::equal("<f3 f2>", c32, FRAC_1_SQRT_2, Provenance::Paper, v),
        Row::equal("<f3 f4>", c34, FRAC_1_SQRT_2, Provenance::Paper, v),
        Row::equal("<f1 f4>", c14, -FRAC_1_SQRT_2, Provenance::Paper, v),
        Row::equal("CHSH", value, 2.0 * SQRT_2, Provenance::Paper, v),
        Row::at_most("CHSH <= 2 sqrt 2", value, 2.0 * SQRT_2, Provenance::Paper, v),
    ];

    let search = |trials, realization, label: &str| {
        let cfg = FuzzConfig {
            trials,
            factor_dim,
            realization,
            include_spin_pair: false,
            exec: Exec::Parallel,
        };
        tsirelson_fuzz(&ctx.streams.derive(label), &cfg, tol).max_chsh
    };
    if fuzz_trials > 0 {
        let max = search(fuzz_trials, Realization::Matrix, "quantum-fuzz");
        rows.push(Row::at_most(
            format!("max CHSH over {fuzz_trials} random quantum trials"),
            max,
            2.0 * SQRT_2,
            Provenance::Paper,
            v,
        ));
    }
    if classical_trials > 0 {
        let max = search(classical_trials, Realization::Classical, "classical-fuzz");
        rows.push(Row::at_most(
            format!("max CHSH over {classical_trials} random classical trials"),
            max,
            2.0,
            Provenance::Paper,
            v,
        ));
    }
    Ok(rows)
}

/// Exhaustive search for a consistent +-1 assignment to the spin-pair
/// quadruple.
pub(super) fn mermin_peres(ctx: &Context) -> Result<Vec<Row>> {
    let (quad, _) = spin_pair_example();
    let result = kochen_specker_search(&quad, &ctx.tol)?;
    Ok(vec![
        Row::equal("reordering sign", result.reorder_sign, -1.0, Provenance::Paper, 0.0),
        Row::at_most(
            "f1 f4 f2 f3 + f1 f2 f3 f4 residual",
            result.identity_residual,
            0.0,
            Provenance::Derived,
            1e-12,
        ),
        Row::equal(
            "assignments tried",
            result.outcomes.len() as f64,
            16.0,
            Provenance::Trivial,
            0.0,
        ),
        Row::equal(
            "consistent assignments",
            result.feasible.len() as f64,
            0.0,
            Provenance::Paper,
            0.0,
        ),
    ])
}
