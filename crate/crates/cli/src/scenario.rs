//! Scenario files: parsing, unit conversion and validation.

use std::path::Path;

use modrabi::modulation::{
    design_drive, effective_params, AmplitudePin, DesignTarget, DriveParams, EffectiveParams, SystemParams,
    ValidityThresholds,
};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::units::Quantity;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub system: SystemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignSpec>,
    pub model: ModelChoice,
    #[serde(default)]
    pub dissipation: bool,
    pub initial_state: InitialState,
    pub grid: GridSpec,
    pub integrator: IntegratorSpec,
    pub fock_cutoff: usize,
    #[serde(default = "all_outputs")]
    pub outputs: Vec<Output>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validity: Option<ValidityThresholds>,
    #[serde(default)]
    pub cutoff_policy: CutoffPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub epsilon: Quantity,
    pub omega: Quantity,
    pub g: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Quantity>,
}

/// Each tone is given either by its normalized amplitude `eta` or by the
/// modulation amplitude `eta·Ω` as a frequency.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub omega1: Quantity,
    pub omega2: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude1: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude2: Option<Quantity>,
    #[serde(default)]
    pub phi1: f64,
    #[serde(default)]
    pub phi2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSpec {
    #[serde(deserialize_with = "lambda_value", serialize_with = "lambda_out")]
    pub lambda: f64,
    pub gratio: f64,
    #[serde(default = "zero_mhz")]
    pub delta1: Quantity,
    #[serde(default)]
    pub pin: AmplitudePin,
    #[serde(default)]
    pub phi1: f64,
    #[serde(default)]
    pub phi2: f64,
}

fn zero_mhz() -> Quantity {
    Quantity::mhz(0.0)
}

/// λ is a number or the string `"inf"`.
fn lambda_value<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Number(x) => Ok(x),
        Raw::Text(s) => parse_lambda(&s).map_err(serde::de::Error::custom),
    }
}

fn lambda_out<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

pub fn parse_lambda(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "infinity" | "Infinity" | "∞" => Ok(f64::INFINITY),
        other => other.parse::<f64>().map_err(|_| format!("expected a number or \"inf\", got {other:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    RotatedExact,
    Effective,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    VacG,
    VacE,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_end: Quantity,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegratorSpec {
    /// Exactly one of `dt` and `points_per_period` (of the fastest frequency
    /// in the Hamiltonian being integrated).
    FixedRk4 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dt: Option<Quantity>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points_per_period: Option<usize>,
    },
    AdaptiveRk45 {
        rtol: f64,
        atol: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_step: Option<Quantity>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    SigmaPop,
    PhotonNumber,
    Fidelity,
    Trace,
    Purity,
    TopFockPop,
}

impl Output {
    pub const ALL: [Output; 6] =
        [Output::SigmaPop, Output::PhotonNumber, Output::Fidelity, Output::Trace, Output::Purity, Output::TopFockPop];

    pub fn column(self) -> &'static str {
        match self {
            Output::SigmaPop => "sigma_pop",
            Output::PhotonNumber => "photon_number",
            Output::Fidelity => "fidelity",
            Output::Trace => "trace",
            Output::Purity => "purity",
            Output::TopFockPop => "top_fock_pop",
        }
    }
}

fn all_outputs() -> Vec<Output> {
    Output::ALL.to_vec()
}

/// What to do when the top Fock level gets populated beyond the limit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffPolicy {
    #[default]
    Warn,
    Fail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mark: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrator {
    FixedDt(f64),
    FixedPointsPerPeriod(usize),
    Adaptive { rtol: f64, atol: f64, max_step: Option<f64> },
}

/// A validated scenario with every quantity in SI / angular units.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub system: SystemParams<f64>,
    pub drive: DriveParams<f64>,
    pub design: Option<DesignTarget<f64>>,
    pub effective: EffectiveParams<f64>,
    pub model: ModelChoice,
    pub dissipation: bool,
    pub initial_state: InitialState,
    pub t_end: f64,
    pub samples: usize,
    pub integrator: Integrator,
    pub fock_cutoff: usize,
    pub outputs: Vec<Output>,
    pub thresholds: ValidityThresholds,
    pub cutoff_policy: CutoffPolicy,
    pub sweep: Option<SweepSpec>,
    pub file: ScenarioFile,
}

pub const MAX_FOCK_CUTOFF: usize = 400;

pub fn read_value(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation("$", format!("invalid JSON: {e}")))
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    parse(read_value(path)?)
}

/// Deserializes and validates; errors carry the dotted path of the field.
pub fn parse(value: Value) -> Result<Scenario, CliError> {
    let file: ScenarioFile = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::validation(if path == "." { "$".into() } else { path }, e.into_inner())
    })?;
    resolve(file)
}

fn optional_angular(q: &Option<Quantity>, path: &str) -> Result<f64, CliError> {
    q.as_ref().map_or(Ok(0.0), |q| q.angular(path))
}

pub fn resolve(file: ScenarioFile) -> Result<Scenario, CliError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(CliError::validation(
            "schema_version",
            format!("unsupported version {} (expected {SCHEMA_VERSION})", file.schema_version),
        ));
    }
    if file.name.trim().is_empty() {
        return Err(CliError::validation("name", "must not be empty"));
    }
    let s = &file.system;
    let system = SystemParams::new(
        s.epsilon.angular("system.epsilon")?,
        s.omega.angular("system.omega")?,
        s.g.angular("system.g")?,
        optional_angular(&s.kappa, "system.kappa")?,
        optional_angular(&s.gamma, "system.gamma")?,
    )
    .map_err(|e| CliError::from_modulation("system", e))?;

    let (drive, design) = match (&file.drive, &file.design) {
        (Some(_), Some(_)) => return Err(CliError::validation("design", "give either `drive` or `design`, not both")),
        (None, None) => return Err(CliError::validation("drive", "missing: give `drive` or `design`")),
        (Some(d), None) => (resolve_drive(d)?, None),
        (None, Some(d)) => {
            let target = resolve_design(d)?;
            let drive = design_drive(&system, &target).map_err(|e| CliError::from_modulation("design", e))?;
            (drive, Some(target))
        }
    };
    let effective = effective_params(&system, &drive).map_err(|e| CliError::from_modulation("drive", e))?;

    if file.grid.samples < 2 {
        return Err(CliError::validation("grid.samples", format!("need at least 2 samples, got {}", file.grid.samples)));
    }
    let t_end = file.grid.t_end.seconds("grid.t_end")?;
    if t_end <= 0.0 {
        return Err(CliError::validation("grid.t_end.value", "must be positive"));
    }
    if file.fock_cutoff < 2 || file.fock_cutoff > MAX_FOCK_CUTOFF {
        return Err(CliError::validation("fock_cutoff", format!("must be in 2..={MAX_FOCK_CUTOFF}, got {}", file.fock_cutoff)));
    }
    let integrator = resolve_integrator(&file.integrator)?;
    if file.outputs.is_empty() {
        return Err(CliError::validation("outputs", "must list at least one observable"));
    }
    let mut outputs = file.outputs.clone();
    outputs.sort();
    outputs.dedup();
    if outputs.contains(&Output::Fidelity) && file.model != ModelChoice::Both {
        outputs.retain(|o| *o != Output::Fidelity);
    }
    if let Some(t) = &file.validity {
        for (name, v) in [("max_ratio", t.max_ratio), ("max_detuning_ratio", t.max_detuning_ratio), ("rwa_margin", t.rwa_margin)]
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::validation(format!("validity.{name}"), "must be finite and positive"));
            }
        }
    }
    if let Some(sw) = &file.sweep {
        check_sweep(sw, "sweep")?;
    }
    Ok(Scenario {
        name: file.name.clone(),
        description: file.description.clone(),
        system,
        drive,
        design,
        effective,
        model: file.model,
        dissipation: file.dissipation,
        initial_state: file.initial_state,
        t_end,
        samples: file.grid.samples,
        integrator,
        fock_cutoff: file.fock_cutoff,
        outputs,
        thresholds: file.validity.unwrap_or_default(),
        cutoff_policy: file.cutoff_policy,
        sweep: file.sweep.clone(),
        file,
    })
}

fn resolve_drive(d: &DriveSpec) -> Result<DriveParams<f64>, CliError> {
    let omega1 = d.omega1.angular("drive.omega1")?;
    let omega2 = d.omega2.angular("drive.omega2")?;
    let eta = |eta: Option<f64>, amp: &Option<Quantity>, omega: f64, k: u8| -> Result<f64, CliError> {
        match (eta, amp) {
            (Some(_), Some(_)) => {
                Err(CliError::validation(format!("drive.amplitude{k}"), format!("give either eta{k} or amplitude{k}, not both")))
            }
            (None, None) => Err(CliError::validation(format!("drive.eta{k}"), format!("missing: give eta{k} or amplitude{k}"))),
            (Some(e), None) => Ok(e),
            (None, Some(a)) => {
                if omega <= 0.0 {
                    return Err(CliError::validation(format!("drive.omega{k}.value"), "must be positive"));
                }
                Ok(a.angular(&format!("drive.amplitude{k}"))? / omega)
            }
        }
    };
    let eta1 = eta(d.eta1, &d.amplitude1, omega1, 1)?;
    let eta2 = eta(d.eta2, &d.amplitude2, omega2, 2)?;
    DriveParams::new(omega1, omega2, eta1, eta2, d.phi1, d.phi2).map_err(|e| CliError::from_modulation("drive", e))
}

fn resolve_design(d: &DesignSpec) -> Result<DesignTarget<f64>, CliError> {
    if d.lambda.is_nan() || d.lambda < 0.0 {
        return Err(CliError::validation("design.lambda", "must be >= 0 (or \"inf\")"));
    }
    if !(d.gratio.is_finite() && d.gratio > 0.0) {
        return Err(CliError::validation("design.gratio", "must be finite and positive"));
    }
    for (name, v) in [("phi1", d.phi1), ("phi2", d.phi2)] {
        if !v.is_finite() {
            return Err(CliError::validation(format!("design.{name}"), "must be finite"));
        }
    }
    Ok(DesignTarget {
        lambda: d.lambda,
        coupling_ratio: d.gratio,
        delta1: d.delta1.angular("design.delta1")?,
        pin: d.pin,
        phi1: d.phi1,
        phi2: d.phi2,
    })
}

fn resolve_integrator(spec: &IntegratorSpec) -> Result<Integrator, CliError> {
    match spec {
        IntegratorSpec::FixedRk4 { dt, points_per_period } => match (dt, points_per_period) {
            (Some(dt), None) => {
                let dt = dt.seconds("integrator.dt")?;
                if dt <= 0.0 {
                    return Err(CliError::validation("integrator.dt.value", "must be positive"));
                }
                Ok(Integrator::FixedDt(dt))
            }
            (None, Some(p)) => {
                if *p < 4 {
                    return Err(CliError::validation("integrator.points_per_period", "must be at least 4"));
                }
                Ok(Integrator::FixedPointsPerPeriod(*p))
            }
            _ => Err(CliError::validation("integrator", "fixed_rk4 needs exactly one of `dt` and `points_per_period`")),
        },
        IntegratorSpec::AdaptiveRk45 { rtol, atol, max_step } => {
            if !(rtol.is_finite() && *rtol > 0.0) {
                return Err(CliError::validation("integrator.rtol", "must be finite and positive"));
            }
            if !(atol.is_finite() && *atol > 0.0) {
                return Err(CliError::validation("integrator.atol", "must be finite and positive"));
            }
            let max_step = match max_step {
                Some(q) => {
                    let v = q.seconds("integrator.max_step")?;
                    if v <= 0.0 {
                        return Err(CliError::validation("integrator.max_step.value", "must be positive"));
                    }
                    Some(v)
                }
                None => None,
            };
            Ok(Integrator::Adaptive { rtol: *rtol, atol: *atol, max_step })
        }
    }
}

pub fn check_sweep(sw: &SweepSpec, path: &str) -> Result<(), CliError> {
    if sw.points < 2 {
        return Err(CliError::validation(format!("{path}.points"), format!("need at least 2 points, got {}", sw.points)));
    }
    if !(sw.from.is_finite() && sw.to.is_finite()) {
        return Err(CliError::validation(format!("{path}.from"), "range must be finite"));
    }
    if sw.param.trim().is_empty() {
        return Err(CliError::validation(format!("{path}.param"), "must name a scenario field"));
    }
    Ok(())
}

/// Writes `x` at a dotted path such as `drive.eta2` or `system.g`.
///
/// Quantities keep their unit and only have `value` replaced. Setting
/// `drive.etaK` drops a conflicting `drive.amplitudeK` and vice versa (a new
/// amplitude is taken in GHz), so a tone can be swept either way.
pub fn set_path(value: &mut Value, path: &str, x: f64) -> Result<(), CliError> {
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::validation("sweep.param", format!("malformed path {path:?}")));
    }
    let (last, parents) = parts.split_last().expect("non-empty split");
    let mut node = &mut *value;
    for (depth, p) in parents.iter().enumerate() {
        node = node
            .get_mut(*p)
            .filter(|n| n.is_object())
            .ok_or_else(|| CliError::validation("sweep.param", format!("no object at {}", parts[..=depth].join("."))))?;
    }
    let obj = node.as_object_mut().ok_or_else(|| CliError::validation("sweep.param", format!("{path} has no parent object")))?;
    if parents == ["drive"] {
        if let Some(k) = last.strip_prefix("eta") {
            obj.remove(&format!("amplitude{k}"));
        } else if let Some(k) = last.strip_prefix("amplitude") {
            if obj.remove(&format!("eta{k}")).is_some() || !obj.contains_key(*last) {
                obj.insert((*last).to_string(), serde_json::json!({"value": x, "unit": "GHz"}));
                return Ok(());
            }
        }
    }
    let number = json_number(x)?;
    match obj.get_mut(*last) {
        Some(Value::Object(q)) if q.contains_key("value") => {
            q.insert("value".into(), number);
        }
        Some(Value::Object(_)) | Some(Value::Array(_)) => {
            return Err(CliError::validation("sweep.param", format!("{path} is not a scalar")));
        }
        Some(slot) => *slot = number,
        None => {
            obj.insert((*last).to_string(), number);
        }
    }
    Ok(())
}

/// Integral values are written as JSON integers so that integer fields
/// (`fock_cutoff`, `grid.samples`) can be swept.
fn json_number(x: f64) -> Result<Value, CliError> {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        Ok(Value::from(x as i64))
    } else {
        serde_json::Number::from_f64(x)
            .map(Value::Number)
            .ok_or_else(|| CliError::validation("sweep", format!("value {x} is not representable")))
    }
}
