use serde::Serialize;

use crate::linalg::CMatrix;
use crate::quantum::{displacement_matrix, HilbertSpace, Operator, Truncation};
use crate::scalar::{cis, cplx, Real, C};

use super::ApplicationError;

/// `ξ(t) = (g̃/ω̃)(1 − e^{iω̃t})`, `φ(t) = (g̃/ω̃)²(ω̃t − sin ω̃t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MagnusPhase<T: Real> {
    pub xi: C<T>,
    pub phi: T,
}

pub fn magnus_phase<T: Real>(coupling: T, omega_eff: T, t: T) -> Result<MagnusPhase<T>, ApplicationError> {
    if omega_eff == T::zero() || !omega_eff.is_finite() {
        return Err(ApplicationError::InvalidParameter("omega_eff must be finite and nonzero".into()));
    }
    let r = coupling / omega_eff;
    let wt = omega_eff * t;
    let xi = (cplx(T::one(), T::zero()) - cis(wt)) * r;
    Ok(MagnusPhase { xi, phi: r * r * (wt - wt.sin()) })
}

/// Qubit-factor eigenvalue `m = Σ sᵢ` of `Jx` and the projector onto the
/// product of σx eigenstates `|sᵢ⟩ = (|e⟩ + sᵢ|g⟩)/√2`.
fn jx_eigenspaces<T: Real>(n_qubits: usize) -> Vec<(i32, CMatrix<T>)> {
    let half = T::lit(0.5);
    let mut out = Vec::with_capacity(1 << n_qubits);
    for pattern in 0..(1usize << n_qubits) {
        let mut proj = CMatrix::identity(1);
        let mut m = 0;
        for q in 0..n_qubits {
            let s = if (pattern >> (n_qubits - 1 - q)) & 1 == 1 { 1 } else { -1 };
            m += s;
            let off = cplx(half * T::from_i32(s).unwrap(), T::zero());
            let d = cplx(half, T::zero());
            // basis order (g, e)
            proj = proj.kron(&CMatrix::from_rows(&[vec![d, off], vec![off, d]]));
        }
        out.push((m, proj));
    }
    out
}

/// `𝒰(t) = exp[iφ(t)Jx²] D[ξ(t)Jx]` on `space`, assembled eigenspace by
/// eigenspace of `Jx`. The returned diagnostic is for the largest
/// displacement `|ξ|·N_qubits`.
pub fn magnus_propagator<T: Real>(
    coupling: T,
    omega_eff: T,
    t: T,
    space: &HilbertSpace,
) -> Result<(Operator<T>, Truncation<T>), ApplicationError> {
    let p = magnus_phase(coupling, omega_eff, t)?;
    let n = space.n_qubits();
    let cutoff = space.fock_cutoff();
    let mut total = CMatrix::zeros(space.dim(), space.dim());
    let mut blocks: Vec<(i32, CMatrix<T>)> = Vec::new();
    for (m, proj) in jx_eigenspaces::<T>(n) {
        let block = match blocks.iter().find(|(k, _)| *k == m) {
            Some((_, b)) => b.clone(),
            None => {
                let mf = T::from_i32(m).unwrap();
                let b = displacement_matrix(cutoff, p.xi * mf).scale(cis(p.phi * mf * mf));
                blocks.push((m, b.clone()));
                b
            }
        };
        total = &total + &proj.kron(&block);
    }
    let truncation = Truncation::for_amplitude(p.xi.norm() * T::from_usize(n).unwrap(), cutoff);
    if !truncation.is_adequate() {
        log::warn!(
            "Magnus propagator: displacement {} exceeds what {} Fock levels represent (tail {})",
            p.xi.norm() * T::from_usize(n).unwrap(),
            cutoff,
            truncation.tail_population
        );
    }
    Ok((Operator::new(*space, total)?, truncation))
}
