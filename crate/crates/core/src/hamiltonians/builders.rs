use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::modulation::{effective_params, DriveParams, EffectiveParams, SystemParams};
use crate::quantum::{annihilation, collective, creation, number, HilbertSpace, Operator, PauliKind};
use crate::scalar::{cis, cplx, Real};

use super::{Descriptor, HamiltonianError, TimeDependentHamiltonian};

/// Relative tolerance for a parameter set to count as a model specialization.
pub const MODEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Equal couplings, `θ = 0`: `g̃(a + a†)Σσx`.
    Qrm,
    /// Counter-rotating coupling suppressed.
    Jc,
    /// Rotating coupling suppressed.
    AntiJc,
    /// `ω̃ = ε̃ = 0`.
    DegenerateAqrm,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Qrm => "QRM",
            ModelKind::Jc => "JC",
            ModelKind::AntiJc => "anti-JC",
            ModelKind::DegenerateAqrm => "degenerate AQRM",
        }
    }
}

struct Ops<T: Real> {
    a: Operator<T>,
    n: Operator<T>,
    jz: Operator<T>,
    a_jp: Operator<T>,
    a_jm: Operator<T>,
}

fn ops<T: Real>(space: &HilbertSpace) -> Result<Ops<T>, HamiltonianError> {
    let a = annihilation(space)?;
    let jp = collective(space, PauliKind::Raise);
    let jm = collective(space, PauliKind::Lower);
    Ok(Ops { n: number(space)?, jz: collective(space, PauliKind::Z), a_jp: &a * &jp, a_jm: &a * &jm, a })
}

/// `c·A + c*·A†`.
fn hermitian_pair<T: Real>(a: &Operator<T>, c: crate::scalar::C<T>) -> Operator<T> {
    let x = a.scale(c);
    &x + &x.adjoint()
}

/// `ω̃a†a + ε̃Jz + g̃ᵣ(e^{−iφ₁}aJ₊ + h.c.) + g̃꜀ᵣ(e^{iφ₂}aJ₋ + h.c.)` with the
/// rotating or counter-rotating part optionally dropped.
fn anisotropic<T: Real>(
    o: &Ops<T>,
    omega: T,
    epsilon: T,
    eff: &EffectiveParams<T>,
    rotating: bool,
    counter: bool,
) -> Operator<T> {
    let mut h = &o.n.scale_real(omega) + &o.jz.scale_real(epsilon);
    if rotating {
        h = &h + &hermitian_pair(&o.a_jp, cis(-eff.phi1) * eff.g_r);
    }
    if counter {
        h = &h + &hermitian_pair(&o.a_jm, cis(eff.phi2) * eff.g_cr);
    }
    h
}

/// `H(t) = ωa†a + ε/2 Σσz + g(a + a†)Σσx + Σⱼ Ωⱼηⱼcos(Ωⱼt + φⱼ) Σσz`.
pub fn lab_hamiltonian<T: Real>(
    sys: &SystemParams<T>,
    drive: &DriveParams<T>,
    space: &HilbertSpace,
) -> Result<TimeDependentHamiltonian<T>, HamiltonianError> {
    sys.validate()?;
    drive.validate()?;
    let o = ops::<T>(space)?;
    let sz = o.jz.scale_real(T::lit(2.0));
    let x = &o.a + &creation(space)?;
    let coupling = &x * &collective(space, PauliKind::X);
    let h0 = &(&o.n.scale_real(sys.omega) + &o.jz.scale_real(sys.epsilon)) + &coupling.scale_real(sys.g);
    let d = *drive;
    let envelope = move |t: T| {
        let v = d.omega1 * d.eta1 * (d.omega1 * t + d.phi1).cos() + d.omega2 * d.eta2 * (d.omega2 * t + d.phi2).cos();
        cplx(v, T::zero())
    };
    TimeDependentHamiltonian::constant(h0, Descriptor::Lab { system: *sys, drive: *drive })?
        .with_hermitian_term(&sz, Arc::new(envelope))
}

/// Exact `H̃(t) = U†HU − iU†U̇` in the [`FramePhases`](super::FramePhases) frame:
/// `ω̃a†a + ε̃Jz + g[e^{i(Ω₁t+2S)}aJ₊ + e^{−i(Ω₂t+2S)}aJ₋ + h.c.]`.
pub fn rotated_hamiltonian<T: Real>(
    sys: &SystemParams<T>,
    drive: &DriveParams<T>,
    space: &HilbertSpace,
) -> Result<TimeDependentHamiltonian<T>, HamiltonianError> {
    sys.validate()?;
    drive.validate()?;
    let eff = effective_params(sys, drive)?;
    let o = ops::<T>(space)?;
    let h0 = &o.n.scale_real(eff.omega_eff) + &o.jz.scale_real(eff.epsilon_eff);
    let (d, g) = (*drive, sys.g);
    let two = T::lit(2.0);
    let red = move |t: T| cis(d.omega1 * t + two * d.phase_modulation(t)) * g;
    let blue = move |t: T| cis(-(d.omega2 * t + two * d.phase_modulation(t))) * g;
    TimeDependentHamiltonian::constant(h0, Descriptor::RotatedExact { system: *sys, drive: *drive, effective: eff })?
        .with_paired_term(&o.a_jp, Arc::new(red))?
        .with_paired_term(&o.a_jm, Arc::new(blue))
}

/// Time-independent anisotropic Rabi Hamiltonian (collective for several qubits).
pub fn effective_hamiltonian<T: Real>(
    eff: &EffectiveParams<T>,
    space: &HilbertSpace,
) -> Result<TimeDependentHamiltonian<T>, HamiltonianError> {
    let o = ops::<T>(space)?;
    let h = anisotropic(&o, eff.omega_eff, eff.epsilon_eff, eff, true, true);
    TimeDependentHamiltonian::constant(h, Descriptor::Effective { effective: *eff })
}

fn violation(kind: ModelKind, requirement: String) -> HamiltonianError {
    HamiltonianError::Constraint { kind: kind.name(), requirement }
}

/// Phase difference folded into `(−π, π]`.
fn wrapped<T: Real>(x: T) -> T {
    let y = x.sin().atan2(x.cos());
    if y == -T::PI() {
        T::PI()
    } else {
        y
    }
}

/// A named specialization; fails if `eff` does not realize it to within
/// `tolerance` (relative to the larger coupling).
pub fn model<T: Real>(
    kind: ModelKind,
    eff: &EffectiveParams<T>,
    space: &HilbertSpace,
    tolerance: T,
) -> Result<TimeDependentHamiltonian<T>, HamiltonianError> {
    let scale = eff.g_r.abs().max(eff.g_cr.abs());
    if scale == T::zero() {
        return Err(violation(kind, "a nonzero coupling".into()));
    }
    let bound = tolerance * scale;
    let o = ops::<T>(space)?;
    let h = match kind {
        ModelKind::Qrm => {
            if (eff.g_r - eff.g_cr).abs() > bound {
                return Err(violation(kind, format!("equal couplings, got {} and {}", eff.g_r, eff.g_cr)));
            }
            if wrapped(eff.theta).abs() > tolerance {
                return Err(violation(kind, format!("theta = 0, got {}", eff.theta)));
            }
            let x = &o.a + &o.a.adjoint();
            let coupling = &x * &collective(space, PauliKind::X);
            &(&o.n.scale_real(eff.omega_eff) + &o.jz.scale_real(eff.epsilon_eff)) + &coupling.scale_real(eff.g_r)
        }
        ModelKind::Jc => {
            if eff.g_cr.abs() > bound {
                return Err(violation(kind, format!("|g_cr| <= {} |g_r|, got g_cr = {}", tolerance, eff.g_cr)));
            }
            anisotropic(&o, eff.omega_eff, eff.epsilon_eff, eff, true, false)
        }
        ModelKind::AntiJc => {
            if eff.g_r.abs() > bound {
                return Err(violation(kind, format!("|g_r| <= {} |g_cr|, got g_r = {}", tolerance, eff.g_r)));
            }
            anisotropic(&o, eff.omega_eff, eff.epsilon_eff, eff, false, true)
        }
        ModelKind::DegenerateAqrm => {
            if eff.omega_eff.abs() > bound || eff.epsilon_eff.abs() > bound {
                return Err(violation(
                    kind,
                    format!("omega_eff = epsilon_eff = 0, got {} and {}", eff.omega_eff, eff.epsilon_eff),
                ));
            }
            anisotropic(&o, T::zero(), T::zero(), eff, true, true)
        }
    };
    TimeDependentHamiltonian::constant(h, Descriptor::Model { model: kind, effective: *eff })
}

/// Anisotropic Dicke Hamiltonian for all qubits sharing one drive. In the
/// interaction picture of `ω̃a†a + ε̃Jz` it reads
/// `g̃ᵣe^{−i(δ₁t+φ₁)}aJ₊ + g̃꜀ᵣe^{−i(δ₂t−φ₂)}aJ₋ + h.c.`.
pub fn dicke_hamiltonian<T: Real>(
    eff: &EffectiveParams<T>,
    space: &HilbertSpace,
    interaction_picture: bool,
) -> Result<TimeDependentHamiltonian<T>, HamiltonianError> {
    let descriptor = Descriptor::Dicke { effective: *eff, interaction_picture };
    let o = ops::<T>(space)?;
    if !interaction_picture {
        let h = anisotropic(&o, eff.omega_eff, eff.epsilon_eff, eff, true, true);
        return TimeDependentHamiltonian::constant(h, descriptor);
    }
    let e = *eff;
    let (d1, d2) = (e.delta1(), e.delta2());
    TimeDependentHamiltonian::constant(Operator::zero(*space), descriptor)?
        .with_paired_term(&o.a_jp, Arc::new(move |t: T| cis(-(d1 * t + e.phi1)) * e.g_r))?
        .with_paired_term(&o.a_jm, Arc::new(move |t: T| cis(-(d2 * t - e.phi2)) * e.g_cr))
}

/// `g(a e^{−iωt} + a† e^{iωt}) Jx` with `Jx = Σσx`.
pub fn reduced_dicke_hamiltonian<T: Real>(
    coupling: T,
    omega_eff: T,
    space: &HilbertSpace,
) -> Result<TimeDependentHamiltonian<T>, HamiltonianError> {
    let a = annihilation(space)?;
    let a_jx = &a * &collective(space, PauliKind::X);
    TimeDependentHamiltonian::constant(Operator::zero(*space), Descriptor::ReducedDicke { coupling, omega_eff })?
        .with_paired_term(&a_jx, Arc::new(move |t: T| cis(-omega_eff * t) * coupling))
}

/// The reduced Dicke form, after checking `δ₁ = δ₂`, `g̃ᵣ = g̃꜀ᵣ` and zero phases.
pub fn reduced_dicke<T: Real>(
    eff: &EffectiveParams<T>,
    space: &HilbertSpace,
    tolerance: T,
) -> Result<TimeDependentHamiltonian<T>, HamiltonianError> {
    let fail = |req: String| HamiltonianError::Constraint { kind: "reduced Dicke model", requirement: req };
    let (d1, d2) = (eff.delta1(), eff.delta2());
    if (d1 - d2).abs() > tolerance * d1.abs().max(d2.abs()) {
        return Err(fail(format!("delta1 = delta2, got {d1} and {d2}")));
    }
    if (eff.g_r - eff.g_cr).abs() > tolerance * eff.g_r.abs().max(eff.g_cr.abs()) {
        return Err(fail(format!("equal couplings, got {} and {}", eff.g_r, eff.g_cr)));
    }
    if eff.phi1.abs() > tolerance || eff.phi2.abs() > tolerance {
        return Err(fail("zero drive phases".into()));
    }
    reduced_dicke_hamiltonian(eff.g_r, d1, space)
}
