use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use modrabi::modulation::AmplitudePin;

use crate::commands::{applications, design, simulate, sweep};
use crate::error::CliError;
use crate::scenario::parse_lambda;

#[derive(Debug, Parser)]
#[command(name = "modrabi", version, about = "Simulate the anisotropic Rabi model synthesized by two-tone qubit frequency modulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a scenario and write a manifest plus CSV time series.
    Simulate {
        scenario: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve for drive parameters realizing a target anisotropy and coupling ratio.
    Design {
        /// Anisotropy g_cr/g_r; `inf` for the anti-JC limit.
        #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: f64,
        /// Target max(|g_r|, |g_cr|)/|omega_eff|.
        #[arg(long, allow_hyphen_values = true)]
        gratio: f64,
        /// Red-sideband detuning in Hz.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta1_hz: f64,
        #[arg(long, value_enum, default_value_t = Pin::Smaller)]
        pin: Pin,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi2: f64,
        /// Take the circuit parameters from this scenario instead of the built-in defaults.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Also write the result as JSON to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write a runnable scenario using the designed drive.
        #[arg(long)]
        emit_scenario: Option<PathBuf>,
    },
    /// Run a scenario over a range of one parameter, in parallel.
    Sweep {
        scenario: PathBuf,
        /// Dotted scenario path, e.g. `drive.eta2` or `fock_cutoff`.
        #[arg(long)]
        param: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Highlight the point closest to this value in the manifest.
        #[arg(long, allow_hyphen_values = true)]
        mark: Option<f64>,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Cat states and the two-qubit gate of the reduced Dicke model.
    Applications {
        #[command(subcommand)]
        which: Application,
    },
    /// Check a scenario and print its resolved parameters without integrating.
    Validate { scenario: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum Application {
    /// Cat-state preparation from |0>|g>; time is in units of 1/omega_eff.
    Cat {
        #[arg(long, allow_hyphen_values = true)]
        gratio: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        omega_t: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, default_value_t = 40)]
        cutoff: usize,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Two-qubit gate after one effective period.
    Gate {
        #[arg(long, allow_hyphen_values = true)]
        gratio: f64,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Pin {
    Smaller,
    Red,
    Blue,
}

impl From<Pin> for AmplitudePin {
    fn from(p: Pin) -> Self {
        match p {
            Pin::Smaller => AmplitudePin::Smaller,
            Pin::Red => AmplitudePin::Red,
            Pin::Blue => AmplitudePin::Blue,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { scenario, output } => simulate::simulate(&scenario, &output),
        Command::Validate { scenario } => simulate::validate(&scenario),
        Command::Design { lambda, gratio, delta1_hz, pin, phi1, phi2, base, output, emit_scenario } => design::design(
            &design::DesignRequest { lambda, gratio, delta1_hz, pin: pin.into(), phi1, phi2 },
            base.as_deref(),
            output.as_deref(),
            emit_scenario.as_deref(),
        ),
        Command::Sweep { scenario, param, from, to, points, mark, output } => {
            sweep::sweep(&scenario, &sweep::SweepArgs { param, from, to, points, mark }, &output)
        }
        Command::Applications { which } => match which {
            Application::Cat { gratio, omega_t, points, cutoff, output } => {
                let m = applications::cat(gratio, omega_t, points, cutoff, &output)?;
                println!(
                    "|xi| = {}, P(g) = {}, P(e) = {}",
                    m.xi_abs,
                    m.even.as_ref().map_or(0.0, |c| c.probability),
                    m.odd.as_ref().map_or(0.0, |c| c.probability)
                );
                Ok(())
            }
            Application::Gate { gratio, output } => {
                let m = applications::gate(gratio, &output)?;
                println!(
                    "theta = {}, e_p = {}, CNOT-equivalent: {} (residual {:e}, {:?} ordering, control qubit {})",
                    m.theta,
                    m.entangling_power,
                    m.cnot.matches,
                    m.cnot.residual,
                    m.cnot.ordering,
                    m.cnot.control + 1
                );
                Ok(())
            }
        },
    }
}
