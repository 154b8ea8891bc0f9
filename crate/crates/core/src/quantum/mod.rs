//! Truncated-Fock-space linear algebra: spaces, operators, states.

mod operator;
mod space;
mod state;

pub use operator::{
    annihilation, collective, creation, displacement, number, qubit_operator, Operator, PauliKind, Truncation,
};
pub(crate) use operator::displacement_matrix;
pub use space::{HilbertSpace, Subsystem};
pub use state::{coherent_overlap, coherent_state, expectation, DensityMatrix, PureState, QuantumState, QubitLevel};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),
    #[error("qubit index {index} out of range for {n_qubits} qubit(s)")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
}
