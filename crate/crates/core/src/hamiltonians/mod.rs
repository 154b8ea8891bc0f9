//! Lab-frame, rotated-frame and effective Hamiltonians, and the model
//! specializations they reduce to.

mod builders;
mod frame;

pub use builders::{
    dicke_hamiltonian, effective_hamiltonian, lab_hamiltonian, model, reduced_dicke, reduced_dicke_hamiltonian,
    rotated_hamiltonian, ModelKind, MODEL_TOLERANCE,
};
pub use frame::FramePhases;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{CMatrix, Nonzeros};
use crate::modulation::{DriveParams, EffectiveParams, ModulationError, SystemParams};
use crate::quantum::{HilbertSpace, Operator, QuantumError};
use crate::scalar::{cone, Real, C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Modulation(#[from] ModulationError),
    #[error("{kind} requires {requirement}")]
    Constraint { kind: &'static str, requirement: String },
}

/// Scalar envelope `t ↦ c(t)` of a driven term.
pub type Coefficient<T> = Arc<dyn Fn(T) -> C<T> + Send + Sync>;

/// Which construction produced a Hamiltonian, with its parameter records.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor<T: Real> {
    Lab { system: SystemParams<T>, drive: DriveParams<T> },
    RotatedExact { system: SystemParams<T>, drive: DriveParams<T>, effective: EffectiveParams<T> },
    Effective { effective: EffectiveParams<T> },
    Model { model: ModelKind, effective: EffectiveParams<T> },
    Dicke { effective: EffectiveParams<T>, interaction_picture: bool },
    ReducedDicke { coupling: T, omega_eff: T },
    Custom,
}

impl<T: Real> Descriptor<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Descriptor::Lab { .. } => "lab",
            Descriptor::RotatedExact { .. } => "rotated_exact",
            Descriptor::Effective { .. } => "effective",
            Descriptor::Model { .. } => "model",
            Descriptor::Dicke { .. } => "dicke",
            Descriptor::ReducedDicke { .. } => "reduced_dicke",
            Descriptor::Custom => "custom",
        }
    }
}

/// `c(t)·A`, plus `c(t)*·A†` when `paired`. Unpaired terms must have a
/// Hermitian `A` and a real `c`.
#[derive(Clone)]
pub(crate) struct DrivenTerm<T: Real> {
    pub operator: CMatrix<T>,
    pub paired: bool,
    pub coefficient: Coefficient<T>,
    pub nz: Nonzeros<T>,
    pub nz_adjoint: Nonzeros<T>,
}

/// `H(t) = H_static + Σₖ [cₖ(t)Aₖ (+ h.c.)]` on a fixed space.
#[derive(Clone)]
pub struct TimeDependentHamiltonian<T: Real> {
    space: HilbertSpace,
    static_part: CMatrix<T>,
    static_nz: Nonzeros<T>,
    terms: Vec<DrivenTerm<T>>,
    descriptor: Descriptor<T>,
}

impl<T: Real> fmt::Debug for TimeDependentHamiltonian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDependentHamiltonian")
            .field("space", &self.space)
            .field("descriptor", &self.descriptor)
            .field("driven_terms", &self.terms.len())
            .finish()
    }
}

impl<T: Real> TimeDependentHamiltonian<T> {
    /// Constant Hamiltonian. `h` must be Hermitian.
    pub fn constant(h: Operator<T>, descriptor: Descriptor<T>) -> Result<Self, HamiltonianError> {
        if !h.is_hermitian(T::tol(1e-10) * h.matrix().max_abs().max(T::one())) {
            return Err(HamiltonianError::Constraint { kind: "Hamiltonian", requirement: "a Hermitian matrix".into() });
        }
        let space = *h.space();
        let static_part = h.into_matrix();
        Ok(Self { space, static_nz: static_part.nonzeros(), static_part, terms: Vec::new(), descriptor })
    }

    /// Adds `c(t)·A + c(t)*·A†`.
    pub fn with_paired_term(mut self, a: &Operator<T>, c: Coefficient<T>) -> Result<Self, HamiltonianError> {
        self.space.check_same(a.space())?;
        let m = a.matrix().clone();
        self.terms.push(DrivenTerm {
            nz: m.nonzeros(),
            nz_adjoint: m.adjoint().nonzeros(),
            operator: m,
            paired: true,
            coefficient: c,
        });
        Ok(self)
    }

    /// Adds `c(t)·A` for Hermitian `A`; only the real part of `c` is used.
    pub fn with_hermitian_term(mut self, a: &Operator<T>, c: Coefficient<T>) -> Result<Self, HamiltonianError> {
        self.space.check_same(a.space())?;
        if !a.is_hermitian(T::tol(1e-12)) {
            return Err(HamiltonianError::Constraint { kind: "unpaired term", requirement: "a Hermitian operator".into() });
        }
        let m = a.matrix().clone();
        let nz = m.nonzeros();
        self.terms.push(DrivenTerm { nz_adjoint: nz.clone(), nz, operator: m, paired: false, coefficient: c });
        Ok(self)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn descriptor(&self) -> &Descriptor<T> {
        &self.descriptor
    }

    pub fn static_part(&self) -> &CMatrix<T> {
        &self.static_part
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn driven_terms(&self) -> &[DrivenTerm<T>] {
        &self.terms
    }

    /// Envelope values at `t`, real-projected for unpaired terms.
    pub(crate) fn coefficients_at(&self, t: T) -> Vec<C<T>> {
        self.terms
            .iter()
            .map(|term| {
                let c = (term.coefficient)(t);
                if term.paired {
                    c
                } else {
                    C::new(c.re, T::zero())
                }
            })
            .collect()
    }

    /// Dense `H(t)`.
    pub fn evaluate(&self, t: T) -> Operator<T> {
        let mut m = self.static_part.clone();
        for (term, c) in self.terms.iter().zip(self.coefficients_at(t)) {
            m.axpy(c, &term.operator);
            if term.paired {
                m.axpy(c.conj(), &term.operator.adjoint());
            }
        }
        Operator::new(self.space, m).expect("dimension fixed at construction")
    }

    /// `out ← s·H(t)ψ`, reusing precomputed envelope values.
    pub(crate) fn apply_scaled(&self, coeffs: &[C<T>], s: C<T>, psi: &[C<T>], out: &mut [C<T>]) {
        for o in out.iter_mut() {
            *o = C::new(T::zero(), T::zero());
        }
        self.static_nz.apply_vec(s, psi, out);
        for (term, &c) in self.terms.iter().zip(coeffs) {
            term.nz.apply_vec(s * c, psi, out);
            if term.paired {
                term.nz_adjoint.apply_vec(s * c.conj(), psi, out);
            }
        }
    }

    /// `H(t)ψ`.
    pub fn apply(&self, t: T, psi: &[C<T>]) -> Vec<C<T>> {
        let mut out = vec![C::new(T::zero(), T::zero()); psi.len()];
        self.apply_scaled(&self.coefficients_at(t), cone(), psi, &mut out);
        out
    }
}
