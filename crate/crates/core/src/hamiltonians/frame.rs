use serde::Serialize;

use crate::linalg::CMatrix;
use crate::modulation::{DriveParams, EffectiveParams, SystemParams};
use crate::quantum::{DensityMatrix, HilbertSpace, Operator, PureState, QuantumError};
use crate::scalar::{cis, Real, C};

/// Diagonal frame `U(t) = U₁(t)U₂(t)` with
/// `U₁ = exp(−iH₀t − iS(t)Σσz)` and `U₂ = exp(iω̃a†a t + iε̃/2 Σσz t)`.
///
/// Basis state `i` with photon number `n` and `Z = Σσz` eigenvalue picks up
/// `θᵢ(t) = rateᵢ·t + weightᵢ·S(t)`, where
/// `rateᵢ = (ω̃−ω)n + (ε̃−ε)Z/2` and `weightᵢ = −Z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FramePhases<T: Real> {
    #[serde(skip)]
    space: HilbertSpace,
    drive: DriveParams<T>,
    rates: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> FramePhases<T> {
    pub fn new(sys: &SystemParams<T>, drive: &DriveParams<T>, eff: &EffectiveParams<T>, space: &HilbertSpace) -> Self {
        let half = T::lit(0.5);
        let d_omega = eff.omega_eff - sys.omega;
        let d_eps = eff.epsilon_eff - sys.epsilon;
        let mut rates = Vec::with_capacity(space.dim());
        let mut weights = Vec::with_capacity(space.dim());
        for i in 0..space.dim() {
            let (bits, n) = space.split(i);
            let z: i64 = (0..space.n_qubits()).map(|q| 2 * space.qubit_bit(bits, q) as i64 - 1).sum();
            let z = T::from_i64(z).unwrap();
            rates.push(d_omega * T::from_usize(n).unwrap() + d_eps * z * half);
            weights.push(-z);
        }
        Self { space: *space, drive: *drive, rates, weights }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    /// `t`-linear coefficient of `θᵢ`.
    pub fn rates(&self) -> &[T] {
        &self.rates
    }

    /// Coefficient of `S(t)` in `θᵢ`.
    pub fn modulation_weights(&self) -> &[T] {
        &self.weights
    }

    pub fn phases(&self, t: T) -> Vec<T> {
        let s = self.drive.phase_modulation(t);
        self.rates.iter().zip(&self.weights).map(|(&r, &w)| r * t + w * s).collect()
    }

    /// Diagonal of `U(t)`.
    pub fn diagonal(&self, t: T) -> Vec<C<T>> {
        self.phases(t).into_iter().map(cis).collect()
    }

    pub fn unitary(&self, t: T) -> Operator<T> {
        Operator::new(self.space, CMatrix::from_diagonal(&self.diagonal(t))).expect("frame matches its space")
    }

    /// `U(t)|ψ̃⟩`: rotated-frame state to lab frame.
    pub fn to_lab(&self, psi: &PureState<T>, t: T) -> Result<PureState<T>, QuantumError> {
        self.space.check_same(psi.space())?;
        let amps = psi.amplitudes().iter().zip(self.diagonal(t)).map(|(a, u)| a * u).collect();
        Ok(PureState::from_raw(self.space, amps))
    }

    /// `U†(t)|ψ⟩`: lab-frame state to rotated frame.
    pub fn to_rotated(&self, psi: &PureState<T>, t: T) -> Result<PureState<T>, QuantumError> {
        self.space.check_same(psi.space())?;
        let amps = psi.amplitudes().iter().zip(self.diagonal(t)).map(|(a, u)| a * u.conj()).collect();
        Ok(PureState::from_raw(self.space, amps))
    }

    /// `U†ρU`.
    pub fn density_to_rotated(&self, rho: &DensityMatrix<T>, t: T) -> Result<DensityMatrix<T>, QuantumError> {
        self.space.check_same(rho.space())?;
        let u = self.diagonal(t);
        let m = rho.matrix();
        let out = CMatrix::from_fn(m.rows(), m.cols(), |i, j| u[i].conj() * m[(i, j)] * u[j]);
        Ok(DensityMatrix::from_raw(self.space, out))
    }
}
