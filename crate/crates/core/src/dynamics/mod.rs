//! Schrödinger and Lindblad propagation, observables, fidelity and period
//! extraction.

mod analysis;
mod dissipator;
mod evolve;
mod ode;

pub use analysis::{extract_period, fidelity, PeriodEstimate};
pub use dissipator::Dissipator;
pub use evolve::{evolve_master, evolve_schrodinger};
pub use ode::StepStats;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonians::HamiltonianError;
use crate::quantum::{DensityMatrix, PureState, QuantumError};
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("step size underflow at t = {t:e} s (step {step:e} s)")]
    StepUnderflow { t: f64, step: f64 },
    #[error("non-finite state at t = {t:e} s")]
    NonFinite { t: f64 },
    #[error("density matrix lost positivity at t = {t:e} s: min eigenvalue {min_eigenvalue:e}")]
    Positivity { t: f64, min_eigenvalue: f64 },
    #[error("no oscillation detected: {0}")]
    NoOscillation(String),
}

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method<T: Real> {
    /// Classical RK4 with steps no longer than `dt`, landing exactly on every grid point.
    FixedRk4 { dt: T },
    /// Dormand–Prince 5(4) with per-component error control.
    AdaptiveRk45 { rtol: T, atol: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig<T: Real> {
    #[serde(flatten)]
    pub method: Method<T>,
    /// Upper bound on the adaptive step; `None` leaves it to the grid spacing.
    #[serde(default)]
    pub max_step: Option<T>,
    /// Keep every `store_every`-th grid point (the last one is always kept).
    #[serde(default = "one")]
    pub store_every: usize,
    /// Keep the state at stored points, not just the observables.
    #[serde(default = "yes")]
    pub store_states: bool,
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

/// Floor below which a density matrix eigenvalue counts as a positivity violation.
pub const POSITIVITY_FLOOR: f64 = -1e-6;
/// Top-Fock population above which the cutoff is flagged as inadequate.
pub const CUTOFF_LIMIT: f64 = 1e-6;

impl<T: Real> IntegratorConfig<T> {
    pub fn fixed(dt: T) -> Self {
        Self { method: Method::FixedRk4 { dt }, max_step: None, store_every: 1, store_states: true }
    }

    pub fn adaptive(rtol: T, atol: T) -> Self {
        Self { method: Method::AdaptiveRk45 { rtol, atol }, max_step: None, store_every: 1, store_states: true }
    }

    /// Fixed step resolving the fastest frequency `omega_max` with
    /// `points_per_period` steps.
    pub fn resolving(omega_max: T, points_per_period: usize) -> Self {
        Self::fixed(T::TAU() / omega_max / T::from_usize(points_per_period).unwrap())
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let positive = |x: T| x.is_finite() && x > T::zero();
        match self.method {
            Method::FixedRk4 { dt } if !positive(dt) => {
                return Err(DynamicsError::InvalidConfig(format!("dt must be > 0, got {dt}")))
            }
            Method::AdaptiveRk45 { rtol, atol } if !(positive(rtol) && positive(atol)) => {
                return Err(DynamicsError::InvalidConfig("rtol and atol must be > 0".into()))
            }
            _ => {}
        }
        if let Some(m) = self.max_step {
            if !positive(m) {
                return Err(DynamicsError::InvalidConfig("max_step must be > 0".into()));
            }
        }
        if self.store_every == 0 {
            return Err(DynamicsError::InvalidConfig("store_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Output times, strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid<T: Real> {
    times: Vec<T>,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(times: Vec<T>) -> Result<Self, DynamicsError> {
        if times.len() < 2 {
            return Err(DynamicsError::InvalidGrid("need at least two time points".into()));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DynamicsError::InvalidGrid("times must be finite and strictly increasing".into()));
        }
        Ok(Self { times })
    }

    /// `samples` evenly spaced points on `[0, t_end]`.
    pub fn uniform(t_end: T, samples: usize) -> Result<Self, DynamicsError> {
        if samples < 2 {
            return Err(DynamicsError::InvalidGrid(format!("samples must be >= 2, got {samples}")));
        }
        if !(t_end.is_finite() && t_end > T::zero()) {
            return Err(DynamicsError::InvalidGrid(format!("t_end must be > 0, got {t_end}")));
        }
        let last = T::from_usize(samples - 1).unwrap();
        Self::new((0..samples).map(|k| t_end * T::from_usize(k).unwrap() / last).collect())
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// States kept along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum StoredStates<T: Real> {
    None,
    Pure(Vec<PureState<T>>),
    Mixed(Vec<DensityMatrix<T>>),
}

/// Observable names recorded by both propagators.
pub mod observables {
    /// Total qubit excitation `Σᵢ⟨σᵢ₊σᵢ₋⟩`.
    pub const SIGMA_POP: &str = "sigma_pop";
    /// `⟨a†a⟩`.
    pub const PHOTON_NUMBER: &str = "photon_number";
    pub const TRACE: &str = "trace";
    pub const PURITY: &str = "purity";
    pub const TOP_FOCK_POP: &str = "top_fock_pop";
    /// Smallest eigenvalue of ρ (master equation only).
    pub const MIN_EIGENVALUE: &str = "min_eigenvalue";
}

/// Time series produced by a propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub states: StoredStates<T>,
    pub observables: BTreeMap<&'static str, Vec<T>>,
    pub stats: StepStats,
    /// First stored time at which the top Fock level exceeded [`CUTOFF_LIMIT`].
    pub cutoff_warning: Option<(T, T)>,
}

impl<T: Real> Trajectory<T> {
    pub fn series(&self, name: &str) -> Option<&[T]> {
        self.observables.get(name).map(|v| v.as_slice())
    }

    pub fn pure_states(&self) -> Option<&[PureState<T>]> {
        match &self.states {
            StoredStates::Pure(v) => Some(v),
            _ => None,
        }
    }

    pub fn density_matrices(&self) -> Option<&[DensityMatrix<T>]> {
        match &self.states {
            StoredStates::Mixed(v) => Some(v),
            _ => None,
        }
    }

    /// Largest `|Tr ρ − 1|` (or `|‖ψ‖² − 1|`) over stored points.
    pub fn trace_drift(&self) -> T {
        self.series(observables::TRACE)
            .map(|s| s.iter().fold(T::zero(), |m, &x| m.max((x - T::one()).abs())))
            .unwrap_or_else(T::zero)
    }

    pub fn min_eigenvalue(&self) -> Option<T> {
        self.series(observables::MIN_EIGENVALUE).map(|s| s.iter().fold(T::infinity(), |m, &x| m.min(x)))
    }
}
