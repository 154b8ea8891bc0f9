//! Serializable summaries of resolved parameters, shared by every manifest.

use modrabi::modulation::{detunings, DriveParams, EffectiveParams, SystemParams, ValidityReport};
use serde::Serialize;

use crate::units::to_hz;

pub const GENERATOR: &str = concat!("modrabi ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Serialize)]
pub struct SystemSummary {
    pub epsilon_hz: f64,
    pub omega_hz: f64,
    pub g_hz: f64,
    pub kappa_hz: f64,
    pub gamma_hz: f64,
}

impl From<&SystemParams<f64>> for SystemSummary {
    fn from(s: &SystemParams<f64>) -> Self {
        Self {
            epsilon_hz: to_hz(s.epsilon),
            omega_hz: to_hz(s.omega),
            g_hz: to_hz(s.g),
            kappa_hz: to_hz(s.kappa),
            gamma_hz: to_hz(s.gamma),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DriveSummary {
    pub omega1_hz: f64,
    pub omega2_hz: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub amplitude1_hz: f64,
    pub amplitude2_hz: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl From<&DriveParams<f64>> for DriveSummary {
    fn from(d: &DriveParams<f64>) -> Self {
        let (a1, a2) = d.amplitudes();
        Self {
            omega1_hz: to_hz(d.omega1),
            omega2_hz: to_hz(d.omega2),
            eta1: d.eta1,
            eta2: d.eta2,
            amplitude1_hz: to_hz(a1),
            amplitude2_hz: to_hz(a2),
            phi1: d.phi1,
            phi2: d.phi2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DetuningSummary {
    pub delta1_hz: f64,
    pub delta2_hz: f64,
    pub delta_minus_hz: f64,
    pub delta_plus_hz: f64,
}

/// Effective model parameters. Non-finite values (λ when g̃ᵣ = 0) serialize as `null`.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveSummary {
    pub g_r_hz: f64,
    pub g_cr_hz: f64,
    pub omega_eff_hz: f64,
    pub epsilon_eff_hz: f64,
    pub theta: f64,
    pub lambda: f64,
    /// `max(|g̃ᵣ|, |g̃꜀ᵣ|) / |ω̃|`
    pub coupling_ratio: f64,
    /// `|g̃ᵣ / ω̃|`
    pub rotating_ratio: f64,
    /// `|g̃꜀ᵣ / ω̃|`
    pub counter_rotating_ratio: f64,
    pub effective_period_s: f64,
}

impl From<&EffectiveParams<f64>> for EffectiveSummary {
    fn from(e: &EffectiveParams<f64>) -> Self {
        Self {
            g_r_hz: to_hz(e.g_r),
            g_cr_hz: to_hz(e.g_cr),
            omega_eff_hz: to_hz(e.omega_eff),
            epsilon_eff_hz: to_hz(e.epsilon_eff),
            theta: e.theta,
            lambda: e.lambda,
            coupling_ratio: e.coupling_ratio(),
            rotating_ratio: e.rotating_ratio(),
            counter_rotating_ratio: e.counter_rotating_ratio(),
            effective_period_s: e.effective_period(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParameterSummary {
    pub system: SystemSummary,
    pub drive: DriveSummary,
    pub detunings: DetuningSummary,
    pub effective: EffectiveSummary,
    pub validity: ValidityReport<f64>,
    pub validity_pass: bool,
}

impl ParameterSummary {
    pub fn new(
        sys: &SystemParams<f64>,
        drive: &DriveParams<f64>,
        eff: &EffectiveParams<f64>,
        validity: ValidityReport<f64>,
    ) -> Self {
        let d = detunings(sys, drive);
        Self {
            system: sys.into(),
            drive: drive.into(),
            detunings: DetuningSummary {
                delta1_hz: to_hz(d.delta1),
                delta2_hz: to_hz(d.delta2),
                delta_minus_hz: to_hz(d.delta_minus),
                delta_plus_hz: to_hz(d.delta_plus),
            },
            effective: eff.into(),
            validity_pass: validity.all_pass(),
            validity,
        }
    }
}
