//! Forward map from physical and drive parameters to the synthesized model,
//! its inverse, and the approximation audit.

mod bessel;
mod design;
mod params;
mod sideband;
mod validity;

pub use bessel::{bessel_j, bessel_j_signed, BESSEL_MAX_ARG, J0_FIRST_ZERO};
pub use design::{design_drive, solve_amplitudes, AmplitudePin, DesignTarget, EQUAL_COUPLING_ETA};
pub use params::{angular, detunings, effective_params, Detunings, DriveParams, EffectiveParams, SystemParams};
pub use sideband::{sideband_amplitudes, SidebandSeries, SidebandTerm};
pub use validity::{validity_report, ValidityReport, ValidityThresholds};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModulationError {
    #[error("Bessel argument {x} outside the validated range |x| <= 50")]
    BesselDomain { x: f64 },
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("unreachable design target: {0}")]
    Unreachable(String),
}
