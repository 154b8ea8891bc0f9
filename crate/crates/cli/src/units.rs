use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A number with an explicit unit, as written in scenario files:
/// `{"value": 5.4, "unit": "GHz"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    Hz,
    #[serde(rename = "kHz")]
    KHz,
    #[serde(rename = "MHz")]
    MHz,
    #[serde(rename = "GHz")]
    GHz,
    #[serde(rename = "s")]
    Second,
    #[serde(rename = "ms")]
    Milli,
    #[serde(rename = "us", alias = "µs")]
    Micro,
    #[serde(rename = "ns")]
    Nano,
    #[serde(rename = "ps")]
    Pico,
}

impl Unit {
    fn frequency_scale(self) -> Option<f64> {
        match self {
            Unit::Hz => Some(1.0),
            Unit::KHz => Some(1e3),
            Unit::MHz => Some(1e6),
            Unit::GHz => Some(1e9),
            _ => None,
        }
    }

    fn time_scale(self) -> Option<f64> {
        match self {
            Unit::Second => Some(1.0),
            Unit::Milli => Some(1e-3),
            Unit::Micro => Some(1e-6),
            Unit::Nano => Some(1e-9),
            Unit::Pico => Some(1e-12),
            _ => None,
        }
    }
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }

    pub fn ghz(value: f64) -> Self {
        Self::new(value, Unit::GHz)
    }

    pub fn mhz(value: f64) -> Self {
        Self::new(value, Unit::MHz)
    }

    pub fn ns(value: f64) -> Self {
        Self::new(value, Unit::Nano)
    }

    fn finite(&self, path: &str) -> Result<f64, CliError> {
        if self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(CliError::validation(format!("{path}.value"), "must be a finite number"))
        }
    }

    /// Ordinary frequency converted to angular frequency (rad/s).
    pub fn angular(&self, path: &str) -> Result<f64, CliError> {
        let scale = self
            .unit
            .frequency_scale()
            .ok_or_else(|| CliError::validation(format!("{path}.unit"), "expected a frequency unit (Hz, kHz, MHz, GHz)"))?;
        Ok(self.finite(path)? * scale * std::f64::consts::TAU)
    }

    pub fn seconds(&self, path: &str) -> Result<f64, CliError> {
        let scale = self
            .unit
            .time_scale()
            .ok_or_else(|| CliError::validation(format!("{path}.unit"), "expected a time unit (s, ms, us, ns, ps)"))?;
        Ok(self.finite(path)? * scale)
    }
}

/// Angular frequency in rad/s back to Hz.
pub fn to_hz(angular: f64) -> f64 {
    angular / std::f64::consts::TAU
}
