use crate::hamiltonians::FramePhases;
use crate::linalg::{CMatrix, Nonzeros};
use crate::modulation::SystemParams;
use crate::quantum::{annihilation, qubit_operator, HilbertSpace, Operator, PauliKind, QuantumError};
use crate::scalar::{cplx, Real};

use super::DynamicsError;

/// Lindblad channel `(rate/2)(2LρL† − ρL†L − L†Lρ)`.
#[derive(Debug, Clone)]
pub struct Dissipator<T: Real> {
    jump: Operator<T>,
    rate: T,
    pub(crate) nz: Nonzeros<T>,
    pub(crate) nz_adjoint: Nonzeros<T>,
}

impl<T: Real> Dissipator<T> {
    pub fn new(jump: Operator<T>, rate: T) -> Result<Self, DynamicsError> {
        if !(rate.is_finite() && rate >= T::zero()) {
            return Err(DynamicsError::InvalidConfig(format!("dissipation rate must be >= 0, got {rate}")));
        }
        let nz = jump.matrix().nonzeros();
        let nz_adjoint = jump.matrix().adjoint().nonzeros();
        Ok(Self { jump, rate, nz, nz_adjoint })
    }

    /// Qubit decay `σᵢ₋` at rate κ on every qubit and resonator loss `a` at
    /// rate γ; zero-rate channels are omitted.
    pub fn standard(sys: &SystemParams<T>, space: &HilbertSpace) -> Result<Vec<Self>, DynamicsError> {
        let mut out = Vec::new();
        if sys.kappa > T::zero() {
            for q in 0..space.n_qubits() {
                out.push(Self::new(qubit_operator(space, q, PauliKind::Lower)?, sys.kappa)?);
            }
        }
        if sys.gamma > T::zero() {
            out.push(Self::new(annihilation(space)?, sys.gamma)?);
        }
        Ok(out)
    }

    pub fn jump_operator(&self) -> &Operator<T> {
        &self.jump
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    /// `L†L`.
    pub fn decay_operator(&self) -> CMatrix<T> {
        self.jump.matrix().adjoint().matmul(self.jump.matrix())
    }

    /// `D[ρ]` for a dense ρ.
    pub fn apply(&self, rho: &CMatrix<T>) -> Result<CMatrix<T>, QuantumError> {
        let d = self.jump.space().dim();
        if rho.rows() != d || rho.cols() != d {
            return Err(QuantumError::DimensionMismatch { left: d, right: rho.rows() });
        }
        let l = self.jump.matrix();
        let ldl = self.decay_operator();
        let jump = l.matmul(rho).matmul(&l.adjoint()).scale_real(T::lit(2.0));
        let anti = &rho.matmul(&ldl) + &ldl.matmul(rho);
        Ok((&jump - &anti).scale_real(self.rate * T::lit(0.5)))
    }

    /// Superoperator on row-major `vec(ρ)`, using `vec(AρB) = (A ⊗ Bᵀ) vec(ρ)`.
    pub fn superoperator(&self) -> CMatrix<T> {
        let d = self.jump.space().dim();
        let l = self.jump.matrix();
        let ldl = self.decay_operator();
        let id = CMatrix::identity(d);
        let jump = l.kron(&l.map(|z| z.conj())).scale_real(T::lit(2.0));
        let anti = &ldl.kron(&id) + &id.kron(&ldl.transpose());
        (&jump - &anti).scale(cplx(self.rate * T::lit(0.5), T::zero()))
    }

    /// Same channel with the jump operator moved into a frame: `U†(t) L U(t)`.
    pub fn transformed(&self, frame: &FramePhases<T>, t: T) -> Result<Self, DynamicsError> {
        frame.space().check_same(self.jump.space())?;
        let u = frame.unitary(t);
        let moved = &(&u.adjoint() * &self.jump) * &u;
        Self::new(moved, self.rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{DensityMatrix, PureState, QubitLevel};

    #[test]
    fn superoperator_matches_direct_action() {
        let space = HilbertSpace::qubit_resonator(3).unwrap();
        let d = Dissipator::new(annihilation::<f64>(&space).unwrap(), 0.3).unwrap();
        let psi = PureState::normalized(
            &space,
            (0..space.dim()).map(|i| cplx(1.0 + i as f64, 0.5 - i as f64 * 0.2)).collect(),
        )
        .unwrap();
        let rho = psi.to_density();
        let direct = d.apply(rho.matrix()).unwrap();
        let vec: Vec<_> = rho.matrix().as_slice().to_vec();
        let via = d.superoperator().mul_vec(&vec);
        for (x, y) in direct.as_slice().iter().zip(&via) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn dissipator_is_traceless() {
        let space = HilbertSpace::qubit_resonator(4).unwrap();
        let rho: DensityMatrix<f64> =
            PureState::basis(&space, &[QubitLevel::Excited], 2).unwrap().to_density();
        for d in Dissipator::standard(&SystemParams::reference_device(), &space).unwrap() {
            assert!(d.apply(rho.matrix()).unwrap().trace().norm() < 1e-6 * d.rate());
        }
    }

    #[test]
    fn negative_rate_rejected() {
        let space = HilbertSpace::qubit_resonator(3).unwrap();
        assert!(Dissipator::new(annihilation::<f64>(&space).unwrap(), -1.0).is_err());
    }
}
