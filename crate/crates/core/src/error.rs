use thiserror::Error;

use crate::algebra::Realization;

/// Errors raised by qcalc operations.
///
/// Axiom checkers never return these for failed identities; failures there are
/// report entries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcalcError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("realization mismatch: {left:?} vs {right:?}")]
    RealizationMismatch { left: Realization, right: Realization },

    #[error("quantity is not Hermitian (anti-Hermitian residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("ensemble form {form} cannot evaluate this quantity: {reason}")]
    FormMismatch { form: &'static str, reason: String },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("not an effect: spectrum [{min_eigenvalue:.12}, {max_eigenvalue:.12}] leaves [0, 1]")]
    NotAnEffect { min_eigenvalue: f64, max_eigenvalue: f64 },

    #[error("effects do not commute (commutator norm {residual:.3e})")]
    NonCommuting { residual: f64 },

    #[error("alternative sums beyond 1 (largest eigenvalue of the sum {max_eigenvalue:.12})")]
    SumExceedsOne { max_eigenvalue: f64 },

    #[error("events {first} and {second} in an alternative are not disjoint (product norm {residual:.3e})")]
    NotDisjoint { first: usize, second: usize, residual: f64 },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("expectations are not equal (spread {spread:.3e})")]
    UnequalExpectations { spread: f64 },

    #[error("probabilities are not equal (spread {spread:.3e})")]
    UnequalProbabilities { spread: f64 },

    #[error("invalid Bell quadruple: {0}")]
    InvalidQuadruple(String),

    #[error("experiment is not sharp on the required set: {0}")]
    NotSharp(String),

    #[error("quadruple does not satisfy the anticommutation relations: {0}")]
    RelationsNotSatisfied(String),

    #[error("reference value is undefined for set member {index}")]
    UndefinedValue { index: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("quantity is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("non-finite entry in quantity data")]
    NonFinite,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T, E = QcalcError> = std::result::Result<T, E>;
