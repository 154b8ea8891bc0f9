use serde::Serialize;

use crate::linalg::CMatrix;
use crate::quantum::{HilbertSpace, Operator};
use crate::scalar::{cis, cone, cplx, czero, Real};

use super::ApplicationError;

/// `ϑ = 2φ(T) = 4π(g̃/ω̃)²`.
pub fn theta_from_ratio<T: Real>(ratio: T) -> T {
    T::lit(4.0) * T::PI() * ratio * ratio
}

/// `e_p = (2/9) sin²(2ϑ)` of `cos ϑ I + i sin ϑ σₓσₓ`.
pub fn entangling_power<T: Real>(theta: T) -> T {
    let s = (T::lit(2.0) * theta).sin();
    T::lit(2.0 / 9.0) * s * s
}

/// Two-qubit gate after one effective period, `cos ϑ I + i sin ϑ σ₁ₓσ₂ₓ`
/// (global phase dropped). The resonator is back in its initial state.
pub fn gate_at_period<T: Real>(coupling: T, omega_eff: T) -> Result<Operator<T>, ApplicationError> {
    if omega_eff == T::zero() || !omega_eff.is_finite() {
        return Err(ApplicationError::InvalidParameter("omega_eff must be finite and nonzero".into()));
    }
    let theta = theta_from_ratio(coupling / omega_eff);
    let c = cplx(theta.cos(), T::zero());
    let s = cplx(T::zero(), theta.sin());
    let z = czero();
    let m = CMatrix::from_rows(&[
        vec![c, z, z, s],
        vec![z, c, s, z],
        vec![z, s, c, z],
        vec![s, z, z, c],
    ]);
    Ok(Operator::new(HilbertSpace::qubits_only(2)?, m)?)
}

/// CNOT in the `|b₁b₂⟩` basis with qubit `control` (0 or 1) as control.
pub fn cnot<T: Real>(control: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(4, 4);
    for i in 0..4usize {
        let (b1, b2) = (i >> 1, i & 1);
        let j = match control {
            0 if b1 == 1 => i ^ 1,
            1 if b2 == 1 => i ^ 2,
            _ => i,
        };
        m[(j, i)] = cone();
    }
    m
}

/// The four single-qubit unitaries `u₁..u₄` taking `(I + iσ₁ₓσ₂ₓ)/√2` to CNOT.
pub fn local_unitaries<T: Real>() -> [CMatrix<T>; 4] {
    let h = T::FRAC_1_SQRT_2();
    let r = |x: f64| cplx(T::lit(x) * h, T::zero());
    let i = |x: f64| cplx(T::zero(), T::lit(x) * h);
    [
        CMatrix::from_rows(&[vec![r(-1.0), r(1.0)], vec![r(1.0), r(1.0)]]),
        CMatrix::identity(2),
        CMatrix::from_rows(&[vec![r(-1.0), i(-1.0)], vec![r(1.0), i(-1.0)]]),
        CMatrix::from_rows(&[vec![r(1.0), i(1.0)], vec![i(1.0), r(1.0)]]),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorOrdering {
    /// `(u₁⊗u₂)·U·(u₃⊗u₄)`
    Direct,
    /// `(u₂⊗u₁)·U·(u₄⊗u₃)`
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CnotCheck<T: Real> {
    pub matches: bool,
    /// Largest entrywise deviation from CNOT after removing the global phase.
    pub residual: T,
    pub ordering: TensorOrdering,
    /// Control qubit of the CNOT that fits best (0-based).
    pub control: usize,
    pub global_phase: T,
}

pub const CNOT_TOLERANCE: f64 = 1e-9;

fn residual_to<T: Real>(m: &CMatrix<T>, target: &CMatrix<T>) -> (T, T) {
    let mut best = (0, 0);
    for r in 0..4 {
        for c in 0..4 {
            if m[(r, c)].norm() > m[best].norm() {
                best = (r, c);
            }
        }
    }
    if target[best].norm() == T::zero() {
        return (T::infinity(), T::zero());
    }
    let phase = m[best].arg() - target[best].arg();
    let aligned = m.scale(cis(-phase));
    let mut res = T::zero();
    for r in 0..4 {
        for c in 0..4 {
            res = res.max((aligned[(r, c)] - target[(r, c)]).norm());
        }
    }
    (res, phase)
}

/// Whether `gate` is locally equivalent to CNOT through the fixed local
/// unitaries of [`local_unitaries`], trying both tensor orderings.
pub fn cnot_equivalence_check<T: Real>(gate: &Operator<T>) -> Result<CnotCheck<T>, ApplicationError> {
    cnot_equivalence_check_with(gate, &local_unitaries())
}

pub fn cnot_equivalence_check_with<T: Real>(
    gate: &Operator<T>,
    locals: &[CMatrix<T>; 4],
) -> Result<CnotCheck<T>, ApplicationError> {
    let g = gate.matrix();
    if g.rows() != 4 || g.cols() != 4 {
        return Err(ApplicationError::InvalidParameter(format!("expected a 4x4 gate, got {}x{}", g.rows(), g.cols())));
    }
    let unitary = g.is_unitary(T::tol(CNOT_TOLERANCE));
    let [u1, u2, u3, u4] = locals;
    let candidates = [
        (TensorOrdering::Direct, &(&u1.kron(u2) * g) * &u3.kron(u4)),
        (TensorOrdering::Swapped, &(&u2.kron(u1) * g) * &u4.kron(u3)),
    ];
    let mut best: Option<CnotCheck<T>> = None;
    for (ordering, m) in &candidates {
        for control in 0..2 {
            let (residual, global_phase) = residual_to(m, &cnot(control));
            if best.is_none_or(|b| residual < b.residual) {
                best = Some(CnotCheck { matches: false, residual, ordering: *ordering, control, global_phase });
            }
        }
    }
    let mut best = best.expect("at least one candidate");
    best.matches = unitary && best.residual < T::tol(CNOT_TOLERANCE);
    Ok(best)
}


#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn entangling_power_values() {
        assert!((entangling_power(PI / 4.0) - 2.0 / 9.0).abs() < 1e-15);
        assert!(entangling_power(PI / 2.0).abs() < 1e-15);
        assert!((theta_from_ratio(0.25) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn zero_coupling_is_identity() {
        let u = gate_at_period(0.0, 1.0).unwrap();
        assert!(u.matrix().distance(&CMatrix::identity(4)) < 1e-15);
        let check = cnot_equivalence_check(&u).unwrap();
        assert!(!check.matches);
        assert!(check.residual > 0.1);
    }

    #[test]
    fn quarter_theta_is_cnot_equivalent() {
        let u = gate_at_period(0.25, 1.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u.matrix()[(0, 0)] - cplx(h, 0.0)).norm() < 1e-15);
        assert!((u.matrix()[(0, 3)] - cplx(0.0, h)).norm() < 1e-15);
        assert!(u.is_unitary(1e-12));
        let check = cnot_equivalence_check(&u).unwrap();
        assert!(check.matches, "{check:?}");
        assert!(check.residual < 1e-9);
        assert_eq!(check.ordering, TensorOrdering::Direct);
        assert_eq!(check.control, 0);
    }

    #[test]
    fn cnot_with_identity_locals() {
        let space = HilbertSpace::qubits_only(2).unwrap();
        let op = Operator::new(space, cnot::<f64>(0)).unwrap();
        let id = CMatrix::identity(2);
        let check = cnot_equivalence_check_with(&op, &[id.clone(), id.clone(), id.clone(), id]).unwrap();
        assert!(check.matches);
        assert_eq!(check.residual, 0.0);
    }

    #[test]
    fn locals_are_unitary() {
        for u in local_unitaries::<f64>() {
            assert!(u.is_unitary(1e-15));
        }
    }
}
