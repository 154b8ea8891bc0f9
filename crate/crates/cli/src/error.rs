use std::fmt;

use modrabi::dynamics::DynamicsError;
use modrabi::hamiltonians::HamiltonianError;
use modrabi::modulation::ModulationError;

/// Failure categories with a fixed process exit code each.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input, reported with the JSON path of the offending field.
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    /// The integration broke down (positivity, non-finite state, step underflow, cutoff).
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("unreachable design target: {0}")]
    Unreachable(String),
    #[error("{context}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(path: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Validation { path: path.into(), message: message.to_string() }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Unreachable(_) => 4,
            CliError::Io { .. } => 1,
        }
    }

    /// Short category label used in manifests.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation { .. } => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Unreachable(_) => "unreachable",
            CliError::Io { .. } => "io",
        }
    }

    /// Maps a modulation error raised while resolving the section at `prefix`.
    pub fn from_modulation(prefix: &str, err: ModulationError) -> Self {
        match err {
            ModulationError::InvalidParameter { field, reason } => Self::validation(format!("{prefix}.{field}"), reason),
            ModulationError::Unreachable(msg) => CliError::Unreachable(msg),
            other => Self::validation(prefix, other),
        }
    }

    pub fn from_hamiltonian(prefix: &str, err: HamiltonianError) -> Self {
        match err {
            HamiltonianError::Modulation(m) => Self::from_modulation(prefix, m),
            other => Self::validation(prefix, other),
        }
    }

    pub fn from_dynamics(err: DynamicsError) -> Self {
        match err {
            DynamicsError::InvalidConfig(m) => Self::validation("integrator", m),
            DynamicsError::InvalidGrid(m) => Self::validation("grid", m),
            DynamicsError::Hamiltonian(h) => Self::from_hamiltonian("drive", h),
            DynamicsError::Quantum(q) => Self::validation("fock_cutoff", q),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

/// Exit code for an error that crossed the `anyhow` boundary.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    err.chain().find_map(|e| e.downcast_ref::<CliError>()).map_or(1, CliError::exit_code)
}
