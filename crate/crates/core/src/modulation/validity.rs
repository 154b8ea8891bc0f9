use serde::{Deserialize, Serialize};

use crate::scalar::Real;

use super::params::{detunings, DriveParams, SystemParams};
use super::sideband::{sideband_amplitudes, SidebandSeries, SidebandTerm};
use super::ModulationError;

/// Quantitative reading of the "much smaller than" conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityThresholds {
    /// Upper bound for `|g/Δ±|`.
    pub max_ratio: f64,
    /// Upper bound for `|δ₁/Δ₋|` and `|δ₂/Δ₊|`.
    pub max_detuning_ratio: f64,
    /// Lower bound for `|Ω±(n)| / |g Jₙ₁ Jₙ₂|` over discarded terms.
    pub rwa_margin: f64,
    /// Audit window `|nᵢ| ≤ window`.
    pub window: u32,
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        Self { max_ratio: 0.1, max_detuning_ratio: 0.2, rwa_margin: 10.0, window: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport<T: Real> {
    pub dispersive_ratio: T,
    pub detuning_ratio: T,
    /// `+∞` when every discarded term has a vanishing coefficient.
    pub rwa_margin: T,
    /// Which discarded term sets the margin: `("alpha" | "beta", n₁, n₂)`.
    pub rwa_limiting_term: Option<(&'static str, i32, i32)>,
    pub dispersive_pass: bool,
    pub detuning_pass: bool,
    pub rwa_pass: bool,
    pub thresholds: ValidityThresholds,
}

impl<T: Real> ValidityReport<T> {
    pub fn all_pass(&self) -> bool {
        self.dispersive_pass && self.detuning_pass && self.rwa_pass
    }
}

pub fn validity_report<T: Real>(
    sys: &SystemParams<T>,
    drive: &DriveParams<T>,
    thresholds: &ValidityThresholds,
) -> Result<ValidityReport<T>, ModulationError> {
    if !(thresholds.max_ratio > 0.0 && thresholds.max_detuning_ratio > 0.0 && thresholds.rwa_margin > 1.0 && thresholds.window >= 1) {
        return Err(ModulationError::InvalidParameter {
            field: "thresholds",
            reason: "need positive ratio bounds, rwa_margin > 1, window >= 1".into(),
        });
    }
    let det = detunings(sys, drive);
    let dm = det.delta_minus.abs();
    let dp = det.delta_plus.abs();
    let dispersive_ratio = (sys.g / dm).abs().max((sys.g / dp).abs());
    let detuning_ratio = (det.delta1 / dm).abs().max((det.delta2 / dp).abs());

    let series = sideband_amplitudes(drive, &det, thresholds.window)?;
    let mut rwa_margin = T::infinity();
    let mut limiting = None;
    let mut scan = |terms: &[SidebandTerm<T>], label: &'static str, kept: (i32, i32)| {
        for term in terms {
            if (term.n1, term.n2) == kept {
                continue;
            }
            let strength = (sys.g * term.coefficient.norm()).abs();
            if strength == T::zero() {
                continue;
            }
            let margin = term.frequency.abs() / strength;
            if margin < rwa_margin {
                rwa_margin = margin;
                limiting = Some((label, term.n1, term.n2));
            }
        }
    };
    scan(&series.alpha, "alpha", SidebandSeries::<T>::RETAINED_ALPHA);
    scan(&series.beta, "beta", SidebandSeries::<T>::RETAINED_BETA);

    let max_ratio = T::lit(thresholds.max_ratio);
    Ok(ValidityReport {
        dispersive_ratio,
        detuning_ratio,
        rwa_margin,
        rwa_limiting_term: limiting,
        dispersive_pass: dispersive_ratio < max_ratio,
        detuning_pass: detuning_ratio < T::lit(thresholds.max_detuning_ratio),
        rwa_pass: rwa_margin > T::lit(thresholds.rwa_margin),
        thresholds: *thresholds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::angular;

    fn fig2a() -> (SystemParams<f64>, DriveParams<f64>) {
        let drive =
            DriveParams::from_amplitudes(angular(3.2e9), angular(2.296e9), angular(6.759e9), angular(4.849e9)).unwrap();
        (SystemParams::reference_device(), drive)
    }

    #[test]
    fn reference_device_with_fig2_drive_passes() {
        let (sys, drive) = fig2a();
        let r = validity_report(&sys, &drive, &ValidityThresholds::default()).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert!(r.dispersive_ratio > 0.0 && r.detuning_ratio > 0.0);
    }

    #[test]
    fn strong_bare_coupling_fails_dispersive_check() {
        let (mut sys, drive) = fig2a();
        sys.g = angular(3e9);
        let r = validity_report(&sys, &drive, &ValidityThresholds::default()).unwrap();
        assert!(!r.dispersive_pass);
        assert!(!r.all_pass());
    }

    #[test]
    fn undriven_margin_is_exact() {
        let (sys, mut drive) = fig2a();
        drive.eta1 = 0.0;
        drive.eta2 = 0.0;
        let r = validity_report(&sys, &drive, &ValidityThresholds::default()).unwrap();
        let dm = sys.epsilon - sys.omega;
        let dp = sys.epsilon + sys.omega;
        assert_eq!(r.rwa_margin, dm.min(dp) / sys.g);
        assert_eq!(r.rwa_limiting_term, Some(("alpha", 0, 0)));
    }

    #[test]
    fn bad_thresholds_rejected() {
        let (sys, drive) = fig2a();
        let t = ValidityThresholds { rwa_margin: 0.5, ..Default::default() };
        assert!(validity_report(&sys, &drive, &t).is_err());
    }
}
