//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state construction, encoding, sampling and parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// A 2x2 matrix failed the unitarity check.
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    /// Qubit amplitudes do not have unit norm.
    #[error("state is not normalized (|c0|^2 + |c1|^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    /// A NaN or infinity reached a constructor.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// Bloch angles outside theta in [0, pi], phi in [0, 2pi).
    #[error("Bloch angles out of range (theta = {theta}, phi = {phi})")]
    AnglesOutOfRange { theta: f64, phi: f64 },

    /// Event angle other than 0 or pi.
    #[error("event angle must be exactly 0 or pi, got {angle}")]
    InvalidEventAngle { angle: f64 },

    /// An event sequence must contain at least one event.
    #[error("event sequence is empty")]
    EmptySequence,

    /// Window length does not match the configured tau.
    #[error("sequence length {actual} does not match configured window length {expected}")]
    WindowLengthMismatch { expected: usize, actual: usize },

    /// Invalid configuration value.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Invalid argument to an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed character in the F/B sequence text format.
    #[error("sequence line {line}: invalid character {found:?} at column {column} (expected 'F' or 'B')")]
    InvalidSequenceChar {
        line: usize,
        column: usize,
        found: char,
    },

    /// Malformed calibration record.
    #[error("calibration line {line}: {message}")]
    InvalidCalibration { line: usize, message: String },

    /// Qubit index not present in a calibration record.
    #[error("qubit index {index} out of range for backend {backend:?} ({available} qubits)")]
    QubitIndexOutOfRange {
        backend: String,
        index: usize,
        available: usize,
    },

    /// Circuit text could not be parsed.
    #[error("{0}")]
    CircuitParse(#[from] crate::circuit::ParseError),

    /// Gates cannot follow the measurement in a circuit.
    #[error("cannot append to a circuit after its measurement")]
    GateAfterMeasure,
}

pub type Result<T> = std::result::Result<T, Error>;
