//! Simulation of a dispersively coupled qubit–resonator system whose qubit
//! frequency is modulated by two tones, and of the anisotropic quantum Rabi
//! model it synthesizes.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what physical runs should use.

pub mod applications;
pub mod dynamics;
pub mod hamiltonians;
pub mod linalg;
pub mod modulation;
pub mod quantum;
pub mod scalar;

pub use scalar::{Real, C};

/// `2π`, for converting ordinary frequencies to angular ones.
pub const TWO_PI: f64 = std::f64::consts::TAU;

pub type Complex64 = C<f64>;
pub type Matrix = linalg::CMatrix<f64>;
pub type Operator = quantum::Operator<f64>;
pub type PureState = quantum::PureState<f64>;
pub type DensityMatrix = quantum::DensityMatrix<f64>;
pub type SystemParams = modulation::SystemParams<f64>;
pub type DriveParams = modulation::DriveParams<f64>;
pub type Detunings = modulation::Detunings<f64>;
pub type EffectiveParams = modulation::EffectiveParams<f64>;
pub type ValidityReport = modulation::ValidityReport<f64>;
pub type Hamiltonian = hamiltonians::TimeDependentHamiltonian<f64>;
pub type Trajectory = dynamics::Trajectory<f64>;
pub type IntegratorConfig = dynamics::IntegratorConfig<f64>;
