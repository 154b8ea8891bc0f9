use serde::{Deserialize, Serialize};

use super::QuantumError;

/// Truncated qubit⊗…⊗qubit⊗resonator space.
///
/// Basis ordering is qubits first, resonator last, row-major: the index of
/// `|b₁…bₙ⟩⊗|m⟩` is `(b₁…bₙ as binary) · N + m`, with qubit 1 the most
/// significant bit and `bᵢ = 0` for `|g⟩`, `1` for `|e⟩`.
///
/// Factor spaces produced by partial traces are represented with
/// `fock_cutoff == 1` (qubits only) or `n_qubits == 0` (resonator only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertSpace {
    n_qubits: usize,
    fock_cutoff: usize,
}

/// Which factor a reduction keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Qubits,
    Resonator,
}

const MAX_QUBITS: usize = 8;

impl HilbertSpace {
    pub fn new(n_qubits: usize, fock_cutoff: usize) -> Result<Self, QuantumError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QuantumError::InvalidSpace(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        if fock_cutoff < 2 {
            return Err(QuantumError::InvalidSpace(format!("fock_cutoff must be >= 2, got {fock_cutoff}")));
        }
        Ok(Self { n_qubits, fock_cutoff })
    }

    /// One qubit coupled to a resonator with `fock_cutoff` levels.
    pub fn qubit_resonator(fock_cutoff: usize) -> Result<Self, QuantumError> {
        Self::new(1, fock_cutoff)
    }

    pub fn qubits_only(n_qubits: usize) -> Result<Self, QuantumError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QuantumError::InvalidSpace(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        Ok(Self { n_qubits, fock_cutoff: 1 })
    }

    pub fn resonator(fock_cutoff: usize) -> Result<Self, QuantumError> {
        if fock_cutoff < 2 {
            return Err(QuantumError::InvalidSpace(format!("fock_cutoff must be >= 2, got {fock_cutoff}")));
        }
        Ok(Self { n_qubits: 0, fock_cutoff })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    #[inline]
    pub fn qubit_dim(&self) -> usize {
        1 << self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.qubit_dim() * self.fock_cutoff
    }

    pub fn has_resonator(&self) -> bool {
        self.fock_cutoff > 1
    }

    pub fn factor(&self, which: Subsystem) -> Result<Self, QuantumError> {
        match which {
            Subsystem::Qubits => Self::qubits_only(self.n_qubits),
            Subsystem::Resonator => Self::resonator(self.fock_cutoff),
        }
    }

    /// Product of a qubits-only space and a resonator-only space.
    pub fn compose(qubits: &Self, resonator: &Self) -> Result<Self, QuantumError> {
        if qubits.fock_cutoff != 1 || resonator.n_qubits != 0 {
            return Err(QuantumError::InvalidSpace(
                "compose expects a qubits-only and a resonator-only space".into(),
            ));
        }
        Ok(Self { n_qubits: qubits.n_qubits, fock_cutoff: resonator.fock_cutoff })
    }

    #[inline]
    pub fn index(&self, qubit_bits: usize, fock: usize) -> usize {
        debug_assert!(qubit_bits < self.qubit_dim() && fock < self.fock_cutoff);
        qubit_bits * self.fock_cutoff + fock
    }

    /// Inverse of [`index`](Self::index): `(qubit_bits, fock)`.
    #[inline]
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.fock_cutoff, index % self.fock_cutoff)
    }

    /// Excitation (0 = g, 1 = e) of qubit `q` (0-based) in a qubit bitstring.
    #[inline]
    pub fn qubit_bit(&self, qubit_bits: usize, q: usize) -> usize {
        (qubit_bits >> (self.n_qubits - 1 - q)) & 1
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<(), QuantumError> {
        if q < self.n_qubits {
            Ok(())
        } else {
            Err(QuantumError::QubitIndex { index: q, n_qubits: self.n_qubits })
        }
    }

    pub(crate) fn require_resonator(&self) -> Result<(), QuantumError> {
        if self.has_resonator() {
            Ok(())
        } else {
            Err(QuantumError::InvalidSpace("operation needs a resonator factor".into()))
        }
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<(), QuantumError> {
        if self == other {
            Ok(())
        } else {
            Err(QuantumError::DimensionMismatch { left: self.dim(), right: other.dim() })
        }
    }
}
