use serde::{Deserialize, Serialize};

use crate::scalar::Real;

use super::bessel::{bessel_j, BESSEL_MAX_ARG};
use super::ModulationError;

/// Angular frequency (rad/s) from an ordinary frequency in Hz.
pub fn angular<T: Real>(hz: f64) -> T {
    T::lit(std::f64::consts::TAU * hz)
}

/// Physical qubit/resonator constants, all angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<T: Real> {
    /// Qubit transition frequency ε.
    pub epsilon: T,
    /// Resonator frequency ω.
    pub omega: T,
    /// Qubit–resonator coupling g.
    pub g: T,
    /// Qubit decay rate κ.
    pub kappa: T,
    /// Resonator loss rate γ.
    pub gamma: T,
}

impl<T: Real> SystemParams<T> {
    pub fn new(epsilon: T, omega: T, g: T, kappa: T, gamma: T) -> Result<Self, ModulationError> {
        let p = Self { epsilon, omega, g, kappa, gamma };
        p.validate()?;
        Ok(p)
    }

    /// Transmon/LC constants: ε/2π = 5.4 GHz, ω/2π = 2.2 GHz, g/2π = 70 MHz,
    /// κ/2π = 50 kHz, γ/2π = 12 kHz.
    pub fn reference_device() -> Self {
        Self {
            epsilon: angular(5.4e9),
            omega: angular(2.2e9),
            g: angular(70e6),
            kappa: angular(50e3),
            gamma: angular(12e3),
        }
    }

    pub fn validate(&self) -> Result<(), ModulationError> {
        let fields = [
            ("epsilon", self.epsilon),
            ("omega", self.omega),
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < T::zero() {
                return Err(ModulationError::InvalidParameter { field: name, reason: "must be finite and >= 0".into() });
            }
        }
        if self.epsilon == self.omega {
            return Err(ModulationError::InvalidParameter {
                field: "epsilon",
                reason: "qubit and resonator must be detuned (epsilon != omega)".into(),
            });
        }
        Ok(())
    }

    /// Same constants without losses.
    pub fn without_dissipation(&self) -> Self {
        Self { kappa: T::zero(), gamma: T::zero(), ..*self }
    }
}

/// Two-tone modulation `Σⱼ Ωⱼηⱼ cos(Ωⱼt + φⱼ) σz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams<T: Real> {
    /// Red-sideband tone Ω₁ (rad/s).
    pub omega1: T,
    /// Blue-sideband tone Ω₂ (rad/s).
    pub omega2: T,
    /// Normalized amplitude η₁ (dimensionless).
    pub eta1: T,
    pub eta2: T,
    /// Initial phases (rad).
    pub phi1: T,
    pub phi2: T,
}

impl<T: Real> DriveParams<T> {
    pub fn new(omega1: T, omega2: T, eta1: T, eta2: T, phi1: T, phi2: T) -> Result<Self, ModulationError> {
        let d = Self { omega1, omega2, eta1, eta2, phi1, phi2 };
        d.validate()?;
        Ok(d)
    }

    /// From tone frequencies and modulation amplitudes `ηⱼΩⱼ` (both angular), zero phases.
    pub fn from_amplitudes(omega1: T, amp1: T, omega2: T, amp2: T) -> Result<Self, ModulationError> {
        Self::new(omega1, omega2, amp1 / omega1, amp2 / omega2, T::zero(), T::zero())
    }

    pub fn validate(&self) -> Result<(), ModulationError> {
        for (name, v) in [("omega1", self.omega1), ("omega2", self.omega2)] {
            if !v.is_finite() || v <= T::zero() {
                return Err(ModulationError::InvalidParameter { field: name, reason: "must be finite and > 0".into() });
            }
        }
        for (name, v) in [("eta1", self.eta1), ("eta2", self.eta2)] {
            if !v.is_finite() || v < T::zero() {
                return Err(ModulationError::InvalidParameter { field: name, reason: "must be finite and >= 0".into() });
            }
            if (T::lit(2.0) * v).as_f64() > BESSEL_MAX_ARG {
                return Err(ModulationError::InvalidParameter {
                    field: name,
                    reason: format!("2*eta must not exceed {BESSEL_MAX_ARG}"),
                });
            }
        }
        for (name, v) in [("phi1", self.phi1), ("phi2", self.phi2)] {
            if !v.is_finite() {
                return Err(ModulationError::InvalidParameter { field: name, reason: "must be finite".into() });
            }
        }
        Ok(())
    }

    /// Modulation amplitudes `(η₁Ω₁, η₂Ω₂)`.
    pub fn amplitudes(&self) -> (T, T) {
        (self.eta1 * self.omega1, self.eta2 * self.omega2)
    }

    /// `S(t) = Σⱼ ηⱼ sin(Ωⱼt + φⱼ)`.
    #[inline]
    pub fn phase_modulation(&self, t: T) -> T {
        self.eta1 * (self.omega1 * t + self.phi1).sin() + self.eta2 * (self.omega2 * t + self.phi2).sin()
    }

    /// Fastest scale of the rotated-frame Hamiltonian: `max(Δ₊, Ω₁+Ω₂)`.
    pub fn fastest_frequency(&self, sys: &SystemParams<T>) -> T {
        (sys.epsilon + sys.omega).max(self.omega1 + self.omega2)
    }

    /// The same drive with the two tones exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            omega1: self.omega2,
            omega2: self.omega1,
            eta1: self.eta2,
            eta2: self.eta1,
            phi1: self.phi2,
            phi2: self.phi1,
        }
    }
}

/// Sideband detunings (rad/s).
///
/// `Δ₋` is stored as `ε − ω`: with that sign `Ω₁ = ε − ω` is the exact red
/// sideband, which is what the frame transformation produces term by term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detunings<T: Real> {
    pub delta1: T,
    pub delta2: T,
    pub delta_minus: T,
    pub delta_plus: T,
}

pub fn detunings<T: Real>(sys: &SystemParams<T>, drive: &DriveParams<T>) -> Detunings<T> {
    let delta_minus = sys.epsilon - sys.omega;
    let delta_plus = sys.epsilon + sys.omega;
    Detunings { delta1: drive.omega1 - delta_minus, delta2: delta_plus - drive.omega2, delta_minus, delta_plus }
}

/// Constants of the synthesized anisotropic Rabi model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams<T: Real> {
    /// Rotating-term coupling g̃ᵣ = −g J₁(2η₁) J₀(2η₂).
    pub g_r: T,
    /// Counter-rotating coupling g̃꜀ᵣ = −g J₀(2η₁) J₁(2η₂).
    pub g_cr: T,
    /// ω̃ = (δ₁ + δ₂)/2.
    pub omega_eff: T,
    /// ε̃ = (δ₂ − δ₁)/2.
    pub epsilon_eff: T,
    /// Drive phases as they enter the couplings: the rotating term carries
    /// `e^{−iφ₁}` on `aσ₊`, the counter-rotating term `e^{iφ₂}` on `aσ₋`.
    pub phi1: T,
    pub phi2: T,
    /// Gauge-invariant relative phase `θ = φ₁ + φ₂`, which equals `φ₂`
    /// under the usual `φ₁ = 0` convention.
    pub theta: T,
    /// Anisotropy `λ = g̃꜀ᵣ / g̃ᵣ`; `±∞` when `g̃ᵣ = 0`, NaN when both vanish.
    pub lambda: T,
}

impl<T: Real> EffectiveParams<T> {
    /// Builds from explicit couplings and detunings.
    pub fn from_couplings(g_r: T, g_cr: T, delta1: T, delta2: T, phi1: T, phi2: T) -> Self {
        let half = T::lit(0.5);
        Self {
            g_r,
            g_cr,
            omega_eff: (delta1 + delta2) * half,
            epsilon_eff: (delta2 - delta1) * half,
            phi1,
            phi2,
            theta: phi1 + phi2,
            lambda: g_cr / g_r,
        }
    }

    /// δ₁ = ω̃ − ε̃.
    pub fn delta1(&self) -> T {
        self.omega_eff - self.epsilon_eff
    }

    /// δ₂ = ω̃ + ε̃.
    pub fn delta2(&self) -> T {
        self.omega_eff + self.epsilon_eff
    }

    /// `|g̃ᵣ/ω̃|`.
    pub fn rotating_ratio(&self) -> T {
        (self.g_r / self.omega_eff).abs()
    }

    /// `|g̃꜀ᵣ/ω̃|`.
    pub fn counter_rotating_ratio(&self) -> T {
        (self.g_cr / self.omega_eff).abs()
    }

    /// `max(|g̃ᵣ|, |g̃꜀ᵣ|) / |ω̃|`: the relative coupling of whichever term dominates.
    pub fn coupling_ratio(&self) -> T {
        self.rotating_ratio().max(self.counter_rotating_ratio())
    }

    /// Period `2π/|ω̃|` of the effective resonator.
    pub fn effective_period(&self) -> T {
        T::TAU() / self.omega_eff.abs()
    }
}

pub fn effective_params<T: Real>(
    sys: &SystemParams<T>,
    drive: &DriveParams<T>,
) -> Result<EffectiveParams<T>, ModulationError> {
    let two = T::lit(2.0);
    let j0_1 = bessel_j(0, two * drive.eta1)?;
    let j1_1 = bessel_j(1, two * drive.eta1)?;
    let j0_2 = bessel_j(0, two * drive.eta2)?;
    let j1_2 = bessel_j(1, two * drive.eta2)?;
    let det = detunings(sys, drive);
    Ok(EffectiveParams::from_couplings(
        -sys.g * j1_1 * j0_2,
        -sys.g * j0_1 * j1_2,
        det.delta1,
        det.delta2,
        drive.phi1,
        drive.phi2,
    ))
}
