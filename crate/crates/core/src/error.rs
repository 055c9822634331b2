use thiserror::Error;

/// Errors raised by the scattering engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the cap of {cap}")]
    OverCap { dim: usize, cap: usize },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("port {port} out of range 1..={n}")]
    PortOutOfRange { port: usize, n: usize },

    #[error("beam splitter ports must differ (both {0})")]
    DuplicatePort(usize),

    #[error("phase angle is not finite")]
    NonFinitePhase,

    #[error("occupations sum to {found}, expected {expected}")]
    ParticleCount { expected: usize, found: usize },

    #[error("fermion configuration has {count} particles in port {port}")]
    PauliViolation { port: usize, count: usize },

    #[error("invalid range {min}..={max}")]
    InvalidRange { min: usize, max: usize },

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("negative probability {0:e} beyond clamping tolerance")]
    NegativeProbability(f64),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
