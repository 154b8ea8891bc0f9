use serde::Serialize;

use crate::quantum::{displacement_matrix, HilbertSpace, PureState, QubitLevel, Subsystem, Truncation};
use crate::scalar::{cis, cplx, czero, Real, C};

use super::{magnus_phase, ApplicationError};

/// Outcome of a projective measurement of the qubit.
pub type Outcome = QubitLevel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CatParity {
    Even,
    Odd,
}

impl CatParity {
    fn sign(self) -> f64 {
        match self {
            CatParity::Even => 1.0,
            CatParity::Odd => -1.0,
        }
    }
}

/// `(|ξ⟩ ± |−ξ⟩)/‖·‖` on a resonator-only space.
#[derive(Debug, Clone, PartialEq)]
pub struct CatState<T: Real> {
    pub parity: CatParity,
    pub xi: C<T>,
    pub state: PureState<T>,
}

fn coherent_column<T: Real>(cutoff: usize, xi: C<T>) -> Vec<C<T>> {
    let d = displacement_matrix(cutoff, xi);
    (0..cutoff).map(|i| d[(i, 0)]).collect()
}

impl<T: Real> CatState<T> {
    pub fn ideal(parity: CatParity, xi: C<T>, fock_cutoff: usize) -> Result<Self, ApplicationError> {
        let space = HilbertSpace::resonator(fock_cutoff)?;
        let s = T::lit(parity.sign());
        let plus = coherent_column(fock_cutoff, xi);
        let minus = coherent_column(fock_cutoff, -xi);
        let amps: Vec<C<T>> = plus.iter().zip(&minus).map(|(a, b)| *a + *b * s).collect();
        if amps.iter().all(|z| z.norm() < T::tol(1e-14)) {
            return Err(ApplicationError::InvalidParameter("odd cat with xi = 0 is undefined".into()));
        }
        let state = PureState::normalized(&space, amps)?;
        Ok(Self { parity, xi, state })
    }

    /// `(1 ± e^{−2|ξ|²})/2`: the probability of preparing this cat by measuring
    /// the qubit after [`cat_evolution`].
    pub fn ideal_probability(&self) -> T {
        let overlap = (T::lit(-2.0) * self.xi.norm_sqr()).exp();
        (T::one() + T::lit(self.parity.sign()) * overlap) * T::lit(0.5)
    }

    /// Total population on Fock levels of the wrong parity.
    pub fn parity_leakage(&self) -> T {
        let skip = match self.parity {
            CatParity::Even => 1,
            CatParity::Odd => 0,
        };
        self.state.fock_populations().iter().skip(skip).step_by(2).fold(T::zero(), |s, p| s + *p)
    }
}

/// Qubit-resonator state reached from `|g⟩⊗|0⟩` under the reduced Dicke
/// model with one qubit: `(e^{iφ}/√2)(|ξ⟩|+⟩ − |−ξ⟩|−⟩)`.
pub fn cat_evolution<T: Real>(
    coupling: T,
    omega_eff: T,
    t: T,
    fock_cutoff: usize,
) -> Result<(PureState<T>, Truncation<T>), ApplicationError> {
    let space = HilbertSpace::qubit_resonator(fock_cutoff)?;
    let p = magnus_phase(coupling, omega_eff, t)?;
    let plus = coherent_column(fock_cutoff, p.xi);
    let minus = coherent_column(fock_cutoff, -p.xi);
    let half = cis(p.phi) * T::lit(0.5);
    let mut amps = vec![czero(); space.dim()];
    for n in 0..fock_cutoff {
        amps[space.index(0, n)] = (plus[n] + minus[n]) * half;
        amps[space.index(1, n)] = (plus[n] - minus[n]) * half;
    }
    let truncation = Truncation::for_amplitude(p.xi.norm(), fock_cutoff);
    if !truncation.is_adequate() {
        log::warn!("cat evolution: |xi| = {} is too large for cutoff {fock_cutoff}", p.xi.norm());
    }
    Ok((PureState::normalized(&space, amps)?, truncation))
}

/// Projects the qubit of a one-qubit state onto `outcome` and returns the
/// renormalized resonator state with its probability. `|g⟩` heralds the even
/// cat, `|e⟩` the odd one. The amplitude `ξ` is recovered from `⟨a²⟩ = ξ²`.
pub fn conditional_cat<T: Real>(
    state: &PureState<T>,
    outcome: Outcome,
) -> Result<(CatState<T>, T), ApplicationError> {
    let space = *state.space();
    if space.n_qubits() != 1 || !space.has_resonator() {
        return Err(ApplicationError::InvalidParameter("conditional_cat needs one qubit and a resonator".into()));
    }
    let n = space.fock_cutoff();
    let bit = outcome.bit();
    let amps: Vec<C<T>> = (0..n).map(|k| state.amplitudes()[space.index(bit, k)]).collect();
    let probability = amps.iter().fold(T::zero(), |s, z| s + z.norm_sqr());
    if probability <= T::tol(1e-14) {
        return Err(ApplicationError::ZeroProbability(match outcome {
            QubitLevel::Ground => "g",
            QubitLevel::Excited => "e",
        }));
    }
    let resonator = space.factor(Subsystem::Resonator)?;
    let projected = PureState::normalized(&resonator, amps)?;
    let a = projected.amplitudes();
    let mut a2 = czero::<T>();
    for k in 2..n {
        let factor = (T::from_usize(k * (k - 1)).unwrap()).sqrt();
        a2 = a2 + a[k - 2].conj() * a[k] * factor;
    }
    let mut xi = a2.sqrt();
    if xi.re < T::zero() {
        xi = -xi;
    }
    if xi.norm() < T::tol(1e-12) {
        xi = cplx(T::zero(), T::zero());
    }
    let parity = match outcome {
        QubitLevel::Ground => CatParity::Even,
        QubitLevel::Excited => CatParity::Odd,
    };
    Ok((CatState { parity, xi, state: projected }, probability))
}
