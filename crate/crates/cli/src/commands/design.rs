use std::path::Path;

use modrabi::modulation::{
    design_drive, effective_params, validity_report, AmplitudePin, DesignTarget, DriveParams, SystemParams,
    ValidityThresholds,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::write_json;
use crate::report::{ParameterSummary, GENERATOR};
use crate::scenario::{self, SCHEMA_VERSION};
use crate::units::{to_hz, Quantity, Unit};

#[derive(Debug, Clone, Copy)]
pub struct DesignRequest {
    pub lambda: f64,
    pub gratio: f64,
    /// Red-sideband detuning in Hz.
    pub delta1_hz: f64,
    pub pin: AmplitudePin,
    pub phi1: f64,
    pub phi2: f64,
}

#[derive(Debug, Serialize)]
pub struct DesignTargetSummary {
    #[serde(serialize_with = "lambda_out")]
    pub lambda: f64,
    pub gratio: f64,
    pub delta1_hz: f64,
    pub pin: AmplitudePin,
    pub phi1: f64,
    pub phi2: f64,
}

fn lambda_out<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

#[derive(Debug, Serialize)]
pub struct DesignOutput {
    pub schema_version: u32,
    pub generator: &'static str,
    pub command: &'static str,
    pub target: DesignTargetSummary,
    pub parameters: ParameterSummary,
}

pub fn solve(
    system: &SystemParams<f64>,
    req: &DesignRequest,
) -> Result<(DriveParams<f64>, DesignOutput), CliError> {
    if req.lambda.is_nan() || req.lambda < 0.0 {
        return Err(CliError::validation("--lambda", "must be >= 0 (or inf)"));
    }
    if !(req.gratio.is_finite() && req.gratio > 0.0) {
        return Err(CliError::validation("--gratio", "must be finite and positive"));
    }
    if !req.delta1_hz.is_finite() {
        return Err(CliError::validation("--delta1-hz", "must be finite"));
    }
    let target = DesignTarget {
        lambda: req.lambda,
        coupling_ratio: req.gratio,
        delta1: req.delta1_hz * std::f64::consts::TAU,
        pin: req.pin,
        phi1: req.phi1,
        phi2: req.phi2,
    };
    let drive = design_drive(system, &target).map_err(|e| CliError::from_modulation("design", e))?;
    let eff = effective_params(system, &drive).map_err(|e| CliError::from_modulation("drive", e))?;
    let validity =
        validity_report(system, &drive, &ValidityThresholds::default()).map_err(|e| CliError::from_modulation("drive", e))?;
    let output = DesignOutput {
        schema_version: SCHEMA_VERSION,
        generator: GENERATOR,
        command: "design",
        target: DesignTargetSummary {
            lambda: req.lambda,
            gratio: req.gratio,
            delta1_hz: req.delta1_hz,
            pin: req.pin,
            phi1: req.phi1,
            phi2: req.phi2,
        },
        parameters: ParameterSummary::new(system, &drive, &eff, validity),
    };
    Ok((drive, output))
}

fn hz(x: f64) -> Value {
    serde_json::to_value(Quantity::new(to_hz(x), Unit::Hz)).expect("quantity serializes")
}

/// A runnable scenario using `drive`: `base` with its drive replaced, or a
/// default comparison run over three effective periods.
pub fn scenario_with_drive(
    base: Option<Value>,
    system: &SystemParams<f64>,
    drive: &DriveParams<f64>,
    period: f64,
) -> Value {
    let drive_json = json!({
        "omega1": hz(drive.omega1),
        "omega2": hz(drive.omega2),
        "eta1": drive.eta1,
        "eta2": drive.eta2,
        "phi1": drive.phi1,
        "phi2": drive.phi2,
    });
    match base {
        Some(mut v) => {
            let obj = v.as_object_mut().expect("scenario is an object");
            obj.remove("design");
            obj.insert("drive".into(), drive_json);
            v
        }
        None => json!({
            "schema_version": SCHEMA_VERSION,
            "name": "designed",
            "description": "Drive produced by `modrabi design`",
            "system": {
                "epsilon": hz(system.epsilon),
                "omega": hz(system.omega),
                "g": hz(system.g),
                "kappa": hz(system.kappa),
                "gamma": hz(system.gamma),
            },
            "drive": drive_json,
            "model": "both",
            "dissipation": false,
            "initial_state": "vac_g",
            "grid": {"t_end": {"value": 3.0 * period * 1e9, "unit": "ns"}, "samples": 301},
            "integrator": {"method": "fixed_rk4", "points_per_period": 40},
            "fock_cutoff": 30
        }),
    }
}

pub fn design(
    req: &DesignRequest,
    base: Option<&Path>,
    out: Option<&Path>,
    emit_scenario: Option<&Path>,
) -> Result<(), CliError> {
    let base_value = base.map(scenario::read_value).transpose()?;
    let system = match base {
        Some(p) => scenario::load(p)?.system,
        None => SystemParams::reference_device(),
    };
    let (drive, output) = solve(&system, req)?;
    let text = serde_json::to_string_pretty(&output).expect("design output serializes");
    println!("{text}");
    if let Some(path) = out {
        write_json(path, &output)?;
    }
    if let Some(path) = emit_scenario {
        let period = output.parameters.effective.effective_period_s;
        let v = scenario_with_drive(base_value, &system, &drive, period);
        scenario::parse(v.clone())?;
        write_json(path, &v)?;
    }
    Ok(())
}
