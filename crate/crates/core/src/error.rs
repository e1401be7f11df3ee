use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e} > tolerance {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("trace is not 1 (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.6e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error(
        "eigensolver did not converge (off-diagonal norm {off_norm:.3e} after {sweeps} sweeps)"
    )]
    NoConvergence { off_norm: f64, sweeps: usize },

    #[error("function evaluated outside its domain at eigenvalue {eigenvalue}")]
    DomainError { eigenvalue: f64 },

    #[error("vector length {len} does not match {rows}x{cols}")]
    LengthMismatch {
        len: usize,
        rows: usize,
        cols: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("{qubits} qubits give dimension {capacity}, too small for dimension {dim}")]
    DimensionTooSmall {
        dim: usize,
        qubits: usize,
        capacity: usize,
    },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("dimension {dim} is not a power of two")]
    NotQubitDimension { dim: usize },

    #[error("bad subsystem index set {keep:?} for {qubits} qubits")]
    BadSubsystemIndex { keep: Vec<usize>, qubits: usize },

    #[error("probability vector invalid: {reason}")]
    BadProbability { reason: String },

    #[error("entropy order must be positive and away from 1 (got {order})")]
    BadOrder { order: f64 },

    #[error("invalid map: {reason}")]
    BadMap { reason: String },

    #[error("bad dimensions: {reason}")]
    BadDims { reason: String },

    #[error("matrix is not unitary (max deviation of u\u{2020}u from identity: {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error(
        "portrait certification failed, which signals an implementation bug \
         (positivity is a theorem for merge maps): {source}"
    )]
    InternalPositivityBreach {
        #[source]
        source: Box<Error>,
    },

    #[error("optimizer did not converge: certificate {certificate:.3e} above tolerance {tol:.3e}")]
    OptimizerDidNotConverge { certificate: f64, tol: f64 },

    #[error("invalid campaign config: {reason}")]
    ConfigError { reason: String },

    #[error("i/o error on {path}: {source}")]
    IoError {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {reason}")]
    ParseError { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
