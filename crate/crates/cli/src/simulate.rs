//! Runs a validated scenario.

use modrabi::dynamics::{
    evolve_master, evolve_schrodinger, fidelity, observables as obs, Dissipator, IntegratorConfig, StepStats,
    TimeGrid, Trajectory,
};
use modrabi::hamiltonians::{effective_hamiltonian, rotated_hamiltonian, TimeDependentHamiltonian};
use modrabi::modulation::{validity_report, ValidityReport};
use modrabi::quantum::{HilbertSpace, PureState, QubitLevel};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{CutoffPolicy, InitialState, Integrator, ModelChoice, Output, Scenario};

/// Observable columns of one run, in output order after `time_s`.
#[derive(Debug, Clone)]
pub struct Series {
    pub columns: Vec<(&'static str, Vec<f64>)>,
}

impl Series {
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| *n == name).map(|(_, v)| v.as_slice())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub trace_drift: f64,
    pub min_eigenvalue: Option<f64>,
    pub max_top_fock_pop: f64,
    /// `(t, population)` where the top Fock level first exceeded the limit.
    pub cutoff_warning: Option<(f64, f64)>,
    pub min_fidelity: Option<f64>,
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub rhs_evaluations: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedIntegrator {
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_per_period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved_frequency_rad_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_step_s: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub times: Vec<f64>,
    /// Exact run for `rotated_exact`/`both`, effective run otherwise; carries
    /// `fidelity` when both models ran.
    pub primary: Series,
    /// The ideal effective-model run when both models ran.
    pub effective: Option<Series>,
    pub integrator: ResolvedIntegrator,
    pub validity: ValidityReport<f64>,
    pub diagnostics: Diagnostics,
}

/// Keep quantum states around only when the fidelity needs them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Storage {
    Auto,
    ObservablesOnly,
}

fn initial_state(space: &HilbertSpace, which: InitialState) -> Result<PureState<f64>, CliError> {
    let level = match which {
        InitialState::VacG => QubitLevel::Ground,
        InitialState::VacE => QubitLevel::Excited,
    };
    PureState::basis(space, &[level], 0).map_err(|e| CliError::validation("initial_state", e))
}

fn integrator_for(
    s: &Scenario,
    h: &TimeDependentHamiltonian<f64>,
    store_states: bool,
) -> (IntegratorConfig<f64>, ResolvedIntegrator) {
    let mut resolved = ResolvedIntegrator {
        method: "fixed_rk4",
        dt_s: None,
        points_per_period: None,
        resolved_frequency_rad_s: None,
        rtol: None,
        atol: None,
        max_step_s: None,
    };
    let mut cfg = match s.integrator {
        Integrator::FixedDt(dt) => {
            resolved.dt_s = Some(dt);
            IntegratorConfig::fixed(dt)
        }
        Integrator::FixedPointsPerPeriod(p) => {
            let mut omega = h.static_part().one_norm();
            if s.model != ModelChoice::Effective {
                omega = omega.max(s.drive.fastest_frequency(&s.system));
            }
            let cfg = IntegratorConfig::resolving(omega, p);
            if let modrabi::dynamics::Method::FixedRk4 { dt } = cfg.method {
                resolved.dt_s = Some(dt);
            }
            resolved.points_per_period = Some(p);
            resolved.resolved_frequency_rad_s = Some(omega);
            cfg
        }
        Integrator::Adaptive { rtol, atol, max_step } => {
            resolved.method = "adaptive_rk45";
            resolved.rtol = Some(rtol);
            resolved.atol = Some(atol);
            resolved.max_step_s = max_step;
            let mut cfg = IntegratorConfig::adaptive(rtol, atol);
            cfg.max_step = max_step;
            cfg
        }
    };
    cfg.store_states = store_states;
    (cfg, resolved)
}

fn series_of(traj: &Trajectory<f64>, outputs: &[Output], fidelity: Option<Vec<f64>>) -> Series {
    let mut fidelity = fidelity;
    let columns = outputs
        .iter()
        .filter_map(|o| match o {
            Output::Fidelity => fidelity.take().map(|f| (o.column(), f)),
            _ => Some((o.column(), traj.series(o.column()).map(<[f64]>::to_vec).unwrap_or_default())),
        })
        .collect();
    Series { columns }
}

fn evolve(
    h: &TimeDependentHamiltonian<f64>,
    dissipators: Option<&[Dissipator<f64>]>,
    psi0: &PureState<f64>,
    grid: &TimeGrid<f64>,
    cfg: &IntegratorConfig<f64>,
) -> Result<Trajectory<f64>, CliError> {
    match dissipators {
        Some(d) => evolve_master(h, d, &psi0.to_density(), grid, cfg),
        None => evolve_schrodinger(h, psi0, grid, cfg),
    }
    .map_err(CliError::from_dynamics)
}

fn add_stats(total: &mut StepStats, s: &StepStats) {
    total.accepted += s.accepted;
    total.rejected += s.rejected;
    total.rhs_evaluations += s.rhs_evaluations;
}

pub fn run(s: &Scenario, storage: Storage) -> Result<RunResult, CliError> {
    let space = HilbertSpace::qubit_resonator(s.fock_cutoff).map_err(|e| CliError::validation("fock_cutoff", e))?;
    let validity = validity_report(&s.system, &s.drive, &s.thresholds).map_err(|e| CliError::from_modulation("drive", e))?;
    let psi0 = initial_state(&space, s.initial_state)?;
    let grid = TimeGrid::uniform(s.t_end, s.samples).map_err(CliError::from_dynamics)?;

    let exact = match s.model {
        ModelChoice::Effective => None,
        _ => Some(rotated_hamiltonian(&s.system, &s.drive, &space).map_err(|e| CliError::from_hamiltonian("drive", e))?),
    };
    let h_eff = effective_hamiltonian(&s.effective, &space).map_err(|e| CliError::from_hamiltonian("drive", e))?;
    let dissipators = if s.dissipation {
        Some(Dissipator::standard(&s.system, &space).map_err(CliError::from_dynamics)?)
    } else {
        None
    };
    let both = s.model == ModelChoice::Both;
    let want_fidelity = both && s.outputs.contains(&Output::Fidelity);
    let store = want_fidelity && storage == Storage::Auto;

    let primary_h = exact.as_ref().unwrap_or(&h_eff);
    let (cfg, resolved) = integrator_for(s, primary_h, store);
    let primary = evolve(primary_h, dissipators.as_deref(), &psi0, &grid, &cfg)?;
    let mut stats = primary.stats;
    let mut min_fidelity = None;
    let mut fidelity_series = None;
    let effective = if both {
        let ideal = evolve(&h_eff, None, &psi0, &grid, &cfg)?;
        add_stats(&mut stats, &ideal.stats);
        if store {
            let psis = ideal.pure_states().expect("states stored");
            let f: Vec<f64> = match (primary.density_matrices(), primary.pure_states()) {
                (Some(rhos), _) => psis.iter().zip(rhos).map(|(p, r)| fidelity(p, r)).collect::<Result<_, _>>(),
                (None, Some(exact)) => {
                    psis.iter().zip(exact).map(|(p, e)| fidelity(p, &e.to_density())).collect::<Result<_, _>>()
                }
                (None, None) => unreachable!("states were requested"),
            }
            .map_err(|e| CliError::Numerical(e.to_string()))?;
            min_fidelity = f.iter().copied().reduce(f64::min);
            fidelity_series = Some(f);
        }
        Some(series_of(&ideal, &s.outputs, None))
    } else {
        None
    };
    let series = series_of(&primary, &s.outputs, fidelity_series);

    let top = primary.series(obs::TOP_FOCK_POP).map_or(0.0, |v| v.iter().copied().fold(0.0, f64::max));
    let diagnostics = Diagnostics {
        trace_drift: primary.trace_drift(),
        min_eigenvalue: primary.min_eigenvalue(),
        max_top_fock_pop: top,
        cutoff_warning: primary.cutoff_warning,
        min_fidelity,
        accepted_steps: stats.accepted,
        rejected_steps: stats.rejected,
        rhs_evaluations: stats.rhs_evaluations,
    };
    if let Some((t, p)) = primary.cutoff_warning {
        log::warn!("{}: top Fock level population {p:e} at t = {t:e} s; consider a larger fock_cutoff", s.name);
        if s.cutoff_policy == CutoffPolicy::Fail {
            return Err(CliError::Numerical(format!(
                "Fock cutoff {} inadequate: top level population {p:e} at t = {t:e} s",
                s.fock_cutoff
            )));
        }
    }
    Ok(RunResult { times: primary.times.clone(), primary: series, effective, integrator: resolved, validity, diagnostics })
}
