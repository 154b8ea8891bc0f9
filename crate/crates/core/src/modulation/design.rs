use serde::{Deserialize, Serialize};

use crate::scalar::Real;

use super::bessel::{bessel_j, J0_FIRST_ZERO};
use super::params::{effective_params, DriveParams, SystemParams};
use super::ModulationError;

/// Amplitude at which `J₀(2η) = J₁(2η)` to four digits, giving equal couplings.
pub const EQUAL_COUPLING_ETA: f64 = 0.7173;

/// Which amplitude is held at [`EQUAL_COUPLING_ETA`] while the other is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudePin {
    /// Pin the smaller amplitude; the other grows towards the first zero of
    /// `J₀`. λ = 0 gives `η₁ = 1.2024`, λ = ∞ gives `η₂ = 1.2024`.
    #[default]
    Smaller,
    /// Pin η₁; λ = 0 gives `η₂ = 0`.
    Red,
    /// Pin η₂; λ = ∞ gives `η₁ = 0`.
    Blue,
}

/// `r(η) = J₁(2η)/J₀(2η)`, increasing from 0 to ∞ on `[0, j₀,₁/2)`.
fn ratio<T: Real>(eta: T) -> Result<T, ModulationError> {
    let x = T::lit(2.0) * eta;
    Ok(bessel_j(1, x)? / bessel_j(0, x)?)
}

/// Solves `r(η) = target` by bisection on the sign of `J₁ − target·J₀`,
/// which shares its sign with `r − target` because `J₀ > 0` on the domain.
fn invert_ratio<T: Real>(target: T) -> Result<T, ModulationError> {
    let top = T::lit(J0_FIRST_ZERO * 0.5);
    if target == T::zero() {
        return Ok(T::zero());
    }
    if target.is_infinite() {
        return Ok(top);
    }
    let two = T::lit(2.0);
    let f = |eta: T| -> Result<T, ModulationError> {
        Ok(bessel_j(1, two * eta)? - target * bessel_j(0, two * eta)?)
    };
    let (mut lo, mut hi) = (T::zero(), top);
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// Drive amplitudes `(η₁, η₂)` realizing `λ = g̃꜀ᵣ/g̃ᵣ = r(η₂)/r(η₁)`.
///
/// Both amplitudes stay in `[0, 1.2024]` where `J₀(2η), J₁(2η) ≥ 0`, so the
/// couplings share a sign and every `λ ∈ [0, ∞]` is reachable.
pub fn solve_amplitudes<T: Real>(target_lambda: T, pin: AmplitudePin) -> Result<(T, T), ModulationError> {
    if target_lambda.is_nan() || target_lambda < T::zero() {
        return Err(ModulationError::Unreachable(format!(
            "anisotropy {} is outside [0, inf] for amplitudes in the non-negative Bessel window",
            target_lambda
        )));
    }
    let fixed = T::lit(EQUAL_COUPLING_ETA);
    let r0 = ratio(fixed)?;
    let pin_red = match pin {
        AmplitudePin::Red => true,
        AmplitudePin::Blue => false,
        AmplitudePin::Smaller => target_lambda > T::one(),
    };
    if pin_red {
        Ok((fixed, invert_ratio(target_lambda * r0)?))
    } else {
        Ok((invert_ratio(r0 / target_lambda)?, fixed))
    }
}

/// Inputs of the inverse design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignTarget<T: Real> {
    /// Anisotropy λ; may be `+∞`.
    pub lambda: T,
    /// `max(|g̃ᵣ|, |g̃꜀ᵣ|) / |ω̃|`.
    pub coupling_ratio: T,
    /// Red-sideband detuning δ₁ (rad/s).
    pub delta1: T,
    pub pin: AmplitudePin,
    pub phi1: T,
    pub phi2: T,
}

/// Full drive for a target anisotropy and relative coupling.
///
/// The amplitudes fix the couplings, the coupling ratio fixes `ω̃`, and
/// `δ₂ = 2ω̃ − δ₁` then fixes both tone frequencies.
pub fn design_drive<T: Real>(sys: &SystemParams<T>, target: &DesignTarget<T>) -> Result<DriveParams<T>, ModulationError> {
    sys.validate()?;
    let ratio = target.coupling_ratio;
    if !(ratio.is_finite() && ratio > T::zero()) {
        return Err(ModulationError::Unreachable(format!("coupling ratio {ratio} must be finite and > 0")));
    }
    if !target.delta1.is_finite() {
        return Err(ModulationError::Unreachable("delta1 must be finite".into()));
    }
    let (eta1, eta2) = solve_amplitudes(target.lambda, target.pin)?;
    let probe = DriveParams { omega1: T::one(), omega2: T::one(), eta1, eta2, phi1: T::zero(), phi2: T::zero() };
    let eff = effective_params(sys, &probe)?;
    let coupling = eff.g_r.abs().max(eff.g_cr.abs());
    if coupling == T::zero() {
        return Err(ModulationError::Unreachable("both effective couplings vanish".into()));
    }
    let omega_eff = coupling / ratio;
    let delta2 = T::lit(2.0) * omega_eff - target.delta1;
    let omega1 = sys.epsilon - sys.omega + target.delta1;
    let omega2 = sys.epsilon + sys.omega - delta2;
    if !(omega1 > T::zero() && omega2 > T::zero()) {
        return Err(ModulationError::Unreachable(format!(
            "required tones ({omega1}, {omega2}) rad/s are not positive"
        )));
    }
    DriveParams::new(omega1, omega2, eta1, eta2, target.phi1, target.phi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::angular;

    fn lambda_of(eta1: f64, eta2: f64) -> f64 {
        let sys = SystemParams::<f64>::reference_device();
        let d = DriveParams::new(1.0, 1.0, eta1, eta2, 0.0, 0.0).unwrap();
        effective_params(&sys, &d).unwrap().lambda
    }

    #[test]
    fn conventional_solutions() {
        let (a, b) = solve_amplitudes(1.0, AmplitudePin::Smaller).unwrap();
        assert_eq!((a, b), (EQUAL_COUPLING_ETA, EQUAL_COUPLING_ETA));
        let (a, b) = solve_amplitudes(0.0, AmplitudePin::Red).unwrap();
        assert_eq!((a, b), (EQUAL_COUPLING_ETA, 0.0));
        let (a, b): (f64, f64) = solve_amplitudes(0.0, AmplitudePin::Smaller).unwrap();
        assert!((a - 1.2024).abs() < 1e-4 && b == EQUAL_COUPLING_ETA);
        let (a, b): (f64, f64) = solve_amplitudes(f64::INFINITY, AmplitudePin::Smaller).unwrap();
        assert!(a == EQUAL_COUPLING_ETA && (b - 1.2024).abs() < 1e-4);
    }

    #[test]
    fn round_trip_anisotropy() {
        for pin in [AmplitudePin::Smaller, AmplitudePin::Red, AmplitudePin::Blue] {
            for &target in &[0.0, 0.25, 0.5, 1.0, 2.0, 4.0, f64::INFINITY] {
                let (e1, e2) = solve_amplitudes(target, pin).unwrap();
                assert!((0.0..=1.2025).contains(&e1) && (0.0..=1.2025).contains(&e2));
                let got = lambda_of(e1, e2);
                if target > 1.0 {
                    assert!((1.0 / got - 1.0 / target).abs() < 1e-9, "{pin:?} {target} -> {got}");
                } else {
                    assert!((got - target).abs() < 1e-9, "{pin:?} {target} -> {got}");
                }
            }
        }
    }

    #[test]
    fn negative_anisotropy_unreachable() {
        assert!(matches!(solve_amplitudes(-0.5, AmplitudePin::Smaller), Err(ModulationError::Unreachable(_))));
        assert!(solve_amplitudes(f64::NAN, AmplitudePin::Red).is_err());
    }

    #[test]
    fn recovers_strong_qrm_drive() {
        let sys = SystemParams::<f64>::reference_device();
        let target = DesignTarget {
            lambda: 1.0,
            coupling_ratio: 1.2,
            delta1: 0.0,
            pin: AmplitudePin::Smaller,
            phi1: 0.0,
            phi2: 0.0,
        };
        let d = design_drive(&sys, &target).unwrap();
        assert!((d.omega1 / angular::<f64>(3.2e9) - 1.0).abs() < 1e-12);
        assert!((d.omega2 / angular::<f64>(7.565e9) - 1.0).abs() < 0.01);
        assert!((d.eta2 / (5.427 / 7.565) - 1.0).abs() < 0.01);
        let eff = effective_params(&sys, &d).unwrap();
        assert!((eff.coupling_ratio() - 1.2).abs() < 1e-9);
    }

    #[test]
    fn jc_design_matches_suppressed_set() {
        let sys = SystemParams::<f64>::reference_device();
        let target = DesignTarget {
            lambda: 0.0,
            coupling_ratio: 1.137,
            delta1: 0.0,
            pin: AmplitudePin::Smaller,
            phi1: 0.0,
            phi2: 0.0,
        };
        let d = design_drive(&sys, &target).unwrap();
        assert!((d.eta1 - 1.2024).abs() < 1e-4);
        assert!((d.omega2 / angular::<f64>(7.565e9) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn impossible_tone_is_unreachable() {
        let sys = SystemParams::<f64>::reference_device();
        let target = DesignTarget {
            lambda: 1.0,
            coupling_ratio: 1e-6,
            delta1: 0.0,
            pin: AmplitudePin::Smaller,
            phi1: 0.0,
            phi2: 0.0,
        };
        assert!(matches!(design_drive(&sys, &target), Err(ModulationError::Unreachable(_))));
    }
}
