//! Closed-form propagator of the reduced Dicke model and what it is used
//! for: Schrödinger-cat preparation and a two-qubit entangling gate.

mod cat;
mod gate;
mod magnus;

pub use cat::{cat_evolution, conditional_cat, CatParity, CatState, Outcome};
pub use gate::{cnot, cnot_equivalence_check, cnot_equivalence_check_with, CNOT_TOLERANCE, entangling_power, gate_at_period, local_unitaries, theta_from_ratio, CnotCheck, TensorOrdering};
pub use magnus::{magnus_phase, magnus_propagator, MagnusPhase};

use thiserror::Error;

use crate::quantum::QuantumError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApplicationError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("measurement outcome {0} has zero probability")]
    ZeroProbability(&'static str),
}
