//! Error type shared across the toolkit.

use thiserror::Error;

/// Everything that can go wrong when constructing or checking objects.
#[derive(Debug, Clone, Error)]
pub enum QmError {
    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    DimensionMismatch {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("matrix entry at ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |A - A†| entry = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -tol = {:.3e}", -tol)]
    NotPsd { min_eigenvalue: f64, tol: f64 },

    #[error("trace is not one: |trace - 1| = {deviation:.3e} exceeds tol {tol:.3e}")]
    TraceNotOne { deviation: f64, tol: f64 },

    #[error("state vector is not normalized: |norm - 1| = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotNormalized { deviation: f64, tol: f64 },

    #[error("matrix is not unitary: max |U·U† - I| entry = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("effect '{label}' is not positive: min eigenvalue {min_eigenvalue:.3e}")]
    EffectNotPositive { label: String, min_eigenvalue: f64 },

    #[error("effect '{label}' exceeds the identity: max eigenvalue {max_eigenvalue:.3e}")]
    EffectExceedsIdentity { label: String, max_eigenvalue: f64 },

    #[error("effects do not sum to the identity: max deviation {deviation:.3e}")]
    SumNotIdentity { deviation: f64 },

    #[error("duplicate outcome label '{label}'")]
    DuplicateLabel { label: String },

    #[error("outcome labels of the joint POVM do not match the single-system POVMs: {context}")]
    LabelMismatch { context: String },

    #[error("conditioning on an outcome of probability {probability:.3e} (≤ tol {tol:.3e})")]
    ZeroProbabilityCondition { probability: f64, tol: f64 },

    #[error("vectors are not orthonormal: {context} (deviation {deviation:.3e})")]
    NotOrthonormal { context: String, deviation: f64 },

    #[error("{groups} eigenvalue groups exceed the probe dimension {dim_p}")]
    TooManyEigenvalueGroups { groups: usize, dim_p: usize },

    #[error("observable is not a ±1-valued projection pair: {context}")]
    NotDichotomic { context: String },

    #[error("scenario parse error: {0}")]
    ParseError(String),

    #[error("scenario validation error at '{field}': {message}")]
    ValidationError { field: String, message: String },

    #[error("check '{check}' requires missing input '{field}'")]
    MissingInput { check: String, field: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, QmError>;
