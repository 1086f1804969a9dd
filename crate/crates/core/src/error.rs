use thiserror::Error;

/// Errors reported by the state-algebra and belt-analytics layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside [{min}, {max})")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("belt requires 0 <= theta1 <= theta2 <= pi, got theta1 = {theta1}, theta2 = {theta2}")]
    InvalidBelt { theta1: f64, theta2: f64 },

    #[error(
        "belt is a single latitude (theta1 = theta2 = {theta}); the belt average is a 0/0 \
         expression there, evaluate the pointwise fidelity at theta instead"
    )]
    DegenerateBelt { theta: f64 },

    #[error("qubit index {index} is out of range for a {n_qubits}-qubit state")]
    QubitIndexOutOfRange { index: usize, n_qubits: usize },

    #[error("state vector must hold 2, 4 or 8 amplitudes, got {len}")]
    BadStateDimension { len: usize },

    #[error("state vector squared norm {norm_sq} deviates from 1 beyond tolerance")]
    NotNormalized { norm_sq: f64 },

    #[error("matrix is not Hermitian (deviation {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace {trace} deviates from 1 beyond tolerance")]
    TraceNotOne { trace: f64 },

    #[error("columns are not orthonormal (deviation {deviation})")]
    NotIsometric { deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
