//! One runner per scenario kind. Each reads its parameters from the context
//! and returns report rows.

mod algebra;
mod dynamics;
mod nonlocality;
mod statistics;
mod studies;

use qcalc_core::Realization;

use crate::error::{CliError, Result};
use crate::report::Row;
use crate::scenario::{Context, Kind};

pub(crate) fn run_kind(kind: Kind, ctx: &Context) -> Result<Vec<Row>> {
    match kind {
        Kind::AxiomCheck => algebra::axiom_check(ctx),
        Kind::Complementarity => algebra::complementarity(ctx),
        Kind::Chsh => nonlocality::chsh(ctx),
        Kind::MerminPeres => nonlocality::mermin_peres(ctx),
        Kind::Uncertainty => statistics::uncertainty(ctx),
        Kind::WeakLaw => statistics::weak_law(ctx),
        Kind::Effects => statistics::effects(ctx),
        Kind::Hydrogen => studies::hydrogen(ctx),
        Kind::Moon => studies::moon(ctx),
        Kind::YoungMeasure => studies::young_measure(ctx),
        Kind::Dynamics => dynamics::dynamics(ctx),
    }
}

fn realization_name(r: Realization) -> &'static str {
    match r {
        Realization::Classical => "classical",
        Realization::Matrix => "matrix",
    }
}

/// `"classical"`, `"matrix"` or `"both"`.
fn parse_realizations(name: &str) -> Result<Vec<Realization>> {
    match name {
        "classical" => Ok(vec![Realization::Classical]),
        "matrix" => Ok(vec![Realization::Matrix]),
        "both" => Ok(vec![Realization::Classical, Realization::Matrix]),
        other => Err(CliError::Param(format!(
            "realization must be classical, matrix or both, got {other:?}"
        ))),
    }
}

fn require_positive(name: &str, value: usize) -> Result<usize> {
    if value == 0 {
        return Err(CliError::Param(format!("{name} must be positive")));
    }
    Ok(value)
}
