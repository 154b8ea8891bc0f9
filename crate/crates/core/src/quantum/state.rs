use crate::linalg::CMatrix;
use crate::scalar::{cone, cplx, czero, Real, C};

use super::operator::{displacement_matrix, Truncation};
use super::{HilbertSpace, Operator, QuantumError, Subsystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitLevel {
    Ground,
    Excited,
}

impl QubitLevel {
    #[inline]
    pub fn bit(self) -> usize {
        match self {
            QubitLevel::Ground => 0,
            QubitLevel::Excited => 1,
        }
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    space: HilbertSpace,
    amplitudes: Vec<C<T>>,
}

/// Hermitian, unit-trace, positive semidefinite density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    space: HilbertSpace,
    matrix: CMatrix<T>,
}

fn squared_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |s, z| s + z.norm_sqr())
}

impl<T: Real> PureState<T> {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(space: &HilbertSpace, amplitudes: Vec<C<T>>) -> Result<Self, QuantumError> {
        if amplitudes.len() != space.dim() {
            return Err(QuantumError::DimensionMismatch { left: space.dim(), right: amplitudes.len() });
        }
        let norm = squared_norm(&amplitudes).sqrt();
        if (norm - T::one()).abs() > T::tol(Self::NORM_TOL) {
            return Err(QuantumError::NotNormalized(norm.as_f64()));
        }
        Ok(Self { space: *space, amplitudes })
    }

    /// Rescales to unit norm; fails only on the zero vector.
    pub fn normalized(space: &HilbertSpace, mut amplitudes: Vec<C<T>>) -> Result<Self, QuantumError> {
        if amplitudes.len() != space.dim() {
            return Err(QuantumError::DimensionMismatch { left: space.dim(), right: amplitudes.len() });
        }
        let norm = squared_norm(&amplitudes).sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(QuantumError::NotNormalized(norm.as_f64()));
        }
        let inv = T::one() / norm;
        for z in &mut amplitudes {
            *z = *z * inv;
        }
        Ok(Self { space: *space, amplitudes })
    }

    /// Integrator output: norm drift is a quality metric, not an error.
    pub(crate) fn from_raw(space: HilbertSpace, amplitudes: Vec<C<T>>) -> Self {
        Self { space, amplitudes }
    }

    /// `|q₁…qₙ⟩ ⊗ |fock⟩`. On a qubits-only space `fock` must be 0.
    pub fn basis(space: &HilbertSpace, qubits: &[QubitLevel], fock: usize) -> Result<Self, QuantumError> {
        if qubits.len() != space.n_qubits() {
            return Err(QuantumError::InvalidState(format!(
                "expected {} qubit labels, got {}",
                space.n_qubits(),
                qubits.len()
            )));
        }
        if fock >= space.fock_cutoff() {
            return Err(QuantumError::InvalidState(format!(
                "Fock level {fock} outside cutoff {}",
                space.fock_cutoff()
            )));
        }
        let bits = qubits.iter().fold(0, |acc, q| (acc << 1) | q.bit());
        let mut amplitudes = vec![czero(); space.dim()];
        amplitudes[space.index(bits, fock)] = cone();
        Ok(Self { space: *space, amplitudes })
    }

    /// `|0⟩` of a resonator-only space, or `|g…g⟩⊗|0⟩` otherwise.
    pub fn vacuum(space: &HilbertSpace) -> Result<Self, QuantumError> {
        Self::basis(space, &vec![QubitLevel::Ground; space.n_qubits()], 0)
    }

    #[inline]
    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        squared_norm(&self.amplitudes).sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C<T>, QuantumError> {
        self.space.check_same(&other.space)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).fold(czero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap_probability(&self, other: &Self) -> Result<T, QuantumError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn evolve(&self, op: &Operator<T>) -> Result<Self, QuantumError> {
        self.space.check_same(op.space())?;
        Ok(Self { space: self.space, amplitudes: op.apply(&self.amplitudes) })
    }

    /// `self ⊗ other` for a qubits-only `self` and resonator-only `other`.
    pub fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        let space = HilbertSpace::compose(&self.space, &other.space)?;
        let mut amplitudes = Vec::with_capacity(space.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(*a * *b);
            }
        }
        Ok(Self { space, amplitudes })
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        let v = &self.amplitudes;
        DensityMatrix {
            space: self.space,
            matrix: CMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj()),
        }
    }

    /// Resonator populations `P(m) = Σ_b |ψ_{b,m}|²`.
    pub fn fock_populations(&self) -> Vec<T> {
        let mut p = vec![T::zero(); self.space.fock_cutoff()];
        for (i, z) in self.amplitudes.iter().enumerate() {
            let (_, m) = self.space.split(i);
            p[m] = p[m] + z.norm_sqr();
        }
        p
    }

    pub fn top_fock_population(&self) -> T {
        *self.fock_populations().last().unwrap()
    }
}

impl<T: Real> DensityMatrix<T> {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const EIGEN_TOL: f64 = 1e-8;

    pub fn new(space: &HilbertSpace, matrix: CMatrix<T>) -> Result<Self, QuantumError> {
        if matrix.rows() != space.dim() || matrix.cols() != space.dim() {
            return Err(QuantumError::DimensionMismatch { left: space.dim(), right: matrix.rows() });
        }
        if !matrix.is_hermitian(T::tol(Self::HERMITIAN_TOL)) {
            return Err(QuantumError::InvalidDensity("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::tol(Self::TRACE_TOL) || tr.im.abs() > T::tol(Self::TRACE_TOL) {
            return Err(QuantumError::InvalidDensity(format!("trace {} != 1", tr.re)));
        }
        let rho = Self { space: *space, matrix };
        let min_ev = rho.min_eigenvalue();
        if min_ev < -Self::EIGEN_TOL.max(T::tol(Self::EIGEN_TOL).as_f64()) {
            return Err(QuantumError::InvalidDensity(format!("negative eigenvalue {min_ev:e}")));
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(space: HilbertSpace, matrix: CMatrix<T>) -> Self {
        Self { space, matrix }
    }

    #[inline]
    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        // Tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ
        self.matrix.as_slice().iter().fold(T::zero(), |s, z| s + z.norm_sqr())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.hermitian_eigenvalues()[0]
    }

    /// `(ρ + ρ†)/2`.
    pub fn symmetrized(&self) -> Self {
        Self { space: self.space, matrix: self.matrix.hermitian_part() }
    }

    pub fn fock_populations(&self) -> Vec<T> {
        let mut p = vec![T::zero(); self.space.fock_cutoff()];
        for (i, z) in self.matrix.diagonal().into_iter().enumerate() {
            let (_, m) = self.space.split(i);
            p[m] = p[m] + z.re;
        }
        p
    }

    pub fn top_fock_population(&self) -> T {
        *self.fock_populations().last().unwrap()
    }

    /// `ρ_A ⊗ ρ_B` for qubits-only `self` and resonator-only `other`.
    pub fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        let space = HilbertSpace::compose(&self.space, &other.space)?;
        Ok(Self { space, matrix: self.matrix.kron(&other.matrix) })
    }

    pub fn partial_trace(&self, keep: Subsystem) -> Result<Self, QuantumError> {
        let target = self.space.factor(keep)?;
        let (qd, n) = (self.space.qubit_dim(), self.space.fock_cutoff());
        let m = &self.matrix;
        let matrix = match keep {
            Subsystem::Qubits => CMatrix::from_fn(qd, qd, |b, c| {
                (0..n).fold(czero(), |acc, k| acc + m[(b * n + k, c * n + k)])
            }),
            Subsystem::Resonator => CMatrix::from_fn(n, n, |i, j| {
                (0..qd).fold(czero(), |acc, b| acc + m[(b * n + i, b * n + j)])
            }),
        };
        Ok(Self { space: target, matrix })
    }
}

/// States against which operator expectations can be taken.
pub trait QuantumState<T: Real> {
    fn space(&self) -> &HilbertSpace;

    /// `⟨ψ|M|ψ⟩` or `Tr(Mρ)` for a matrix on this state's space.
    fn expect_matrix(&self, m: &CMatrix<T>) -> C<T>;
}

impl<T: Real> QuantumState<T> for PureState<T> {
    fn space(&self) -> &HilbertSpace {
        &self.space
    }

    fn expect_matrix(&self, m: &CMatrix<T>) -> C<T> {
        let mv = m.mul_vec(&self.amplitudes);
        self.amplitudes.iter().zip(&mv).fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }
}

impl<T: Real> QuantumState<T> for DensityMatrix<T> {
    fn space(&self) -> &HilbertSpace {
        &self.space
    }

    fn expect_matrix(&self, m: &CMatrix<T>) -> C<T> {
        // Tr(Mρ) = Σ_ij M_ij ρ_ji
        let d = m.rows();
        let mut acc = czero();
        for i in 0..d {
            for j in 0..d {
                acc = acc + m[(i, j)] * self.matrix[(j, i)];
            }
        }
        acc
    }
}

pub fn expectation<T: Real, S: QuantumState<T>>(op: &Operator<T>, state: &S) -> Result<C<T>, QuantumError> {
    op.space().check_same(state.space())?;
    Ok(state.expect_matrix(op.matrix()))
}

/// Coherent state `D(ξ)|0⟩` on the resonator factor of `space`, renormalized
/// after truncation.
pub fn coherent_state<T: Real>(
    space: &HilbertSpace,
    xi: C<T>,
) -> Result<(PureState<T>, Truncation<T>), QuantumError> {
    let resonator = space.factor(Subsystem::Resonator)?;
    let n = resonator.fock_cutoff();
    let d = displacement_matrix(n, xi);
    let column: Vec<C<T>> = (0..n).map(|i| d[(i, 0)]).collect();
    let state = PureState::normalized(&resonator, column)?;
    Ok((state, Truncation::for_amplitude(xi.norm(), n)))
}

/// Closed-form overlap `⟨α|β⟩ = exp(−(|α|²+|β|²)/2 + α*β)` of ideal coherent states.
pub fn coherent_overlap<T: Real>(alpha: C<T>, beta: C<T>) -> C<T> {
    let half = T::lit(0.5);
    (cplx(-(alpha.norm_sqr() + beta.norm_sqr()) * half, T::zero()) + alpha.conj() * beta).exp()
}
