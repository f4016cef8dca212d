//! Quantities, ensembles, effects, experiments and dynamics over finite
//! classical (commutative tuple) and quantum (complex matrix) realizations.

pub mod algebra;
pub mod codec;
pub mod dynamics;
pub mod effects;
pub mod ensembles;
mod error;
pub mod exec;
pub mod experiments;
pub mod nonlocality;
pub mod random;
pub mod report;
pub mod rng;
mod tolerances;

pub type C64 = num_complex::Complex<f64>;

pub use algebra::{identity, pauli, scalar, truncated_oscillator, zero, Quantity, Realization};
pub use ensembles::{Ensemble, EnsembleForm, MomentStats};
pub use error::{QcalcError, Result};
pub use exec::Exec;
pub use report::{AxiomEntry, AxiomReport, CheckStatus};
pub use rng::RngStreams;
pub use tolerances::Tolerances;
