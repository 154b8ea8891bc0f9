use std::path::Path;

use serde::Serialize;

use crate::error::CliError;
use crate::output::{write_json, Table};
use crate::report::{ParameterSummary, GENERATOR};
use crate::scenario::{self, InitialState, ModelChoice, Scenario, ScenarioFile, SCHEMA_VERSION};
use crate::simulate::{run, Diagnostics, ResolvedIntegrator, RunResult, Series, Storage};

pub const MANIFEST: &str = "manifest.json";
pub const TIMESERIES: &str = "timeseries.csv";
pub const EFFECTIVE: &str = "effective.csv";

#[derive(Debug, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub columns: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SimulateManifest<'a> {
    pub schema_version: u32,
    pub generator: &'static str,
    pub command: &'static str,
    pub status: &'static str,
    pub source: String,
    pub scenario: &'a ScenarioFile,
    pub parameters: ParameterSummary,
    pub model: ModelChoice,
    pub dissipation: bool,
    pub initial_state: InitialState,
    pub fock_cutoff: usize,
    pub t_end_s: f64,
    pub samples: usize,
    pub integrator: &'a ResolvedIntegrator,
    pub diagnostics: &'a Diagnostics,
    pub files: Vec<FileEntry>,
}

fn table(times: &[f64], series: &Series) -> Table {
    let mut header = vec!["time_s"];
    header.extend(series.columns.iter().map(|(n, _)| *n));
    let mut t = Table::new(&header);
    let mut row = Vec::with_capacity(header.len());
    for (k, time) in times.iter().enumerate() {
        row.clear();
        row.push(*time);
        row.extend(series.columns.iter().map(|(_, v)| v[k]));
        t.row(&row);
    }
    t
}

fn columns(series: &Series) -> Vec<String> {
    std::iter::once("time_s").chain(series.columns.iter().map(|(n, _)| *n)).map(String::from).collect()
}

/// Runs the scenario and writes the manifest and CSV files into `out`.
pub fn simulate_to(s: &Scenario, source: &str, out: &Path) -> Result<RunResult, CliError> {
    let result = run(s, Storage::Auto)?;
    let mut files = Vec::new();
    table(&result.times, &result.primary).write(&out.join(TIMESERIES))?;
    files.push(FileEntry { name: TIMESERIES.into(), columns: columns(&result.primary) });
    if let Some(eff) = &result.effective {
        table(&result.times, eff).write(&out.join(EFFECTIVE))?;
        files.push(FileEntry { name: EFFECTIVE.into(), columns: columns(eff) });
    }
    let manifest = SimulateManifest {
        schema_version: SCHEMA_VERSION,
        generator: GENERATOR,
        command: "simulate",
        status: "ok",
        source: source.into(),
        scenario: &s.file,
        parameters: ParameterSummary::new(&s.system, &s.drive, &s.effective, result.validity.clone()),
        model: s.model,
        dissipation: s.dissipation,
        initial_state: s.initial_state,
        fock_cutoff: s.fock_cutoff,
        t_end_s: s.t_end,
        samples: s.samples,
        integrator: &result.integrator,
        diagnostics: &result.diagnostics,
        files,
    };
    write_json(&out.join(MANIFEST), &manifest)?;
    Ok(result)
}

pub fn simulate(path: &Path, out: &Path) -> Result<(), CliError> {
    let s = scenario::load(path)?;
    let result = simulate_to(&s, &path.display().to_string(), out)?;
    let d = &result.diagnostics;
    println!(
        "{}: |g/w| = {:.4}, {} samples, trace drift {:.2e}{}",
        s.name,
        s.effective.coupling_ratio(),
        result.times.len(),
        d.trace_drift,
        d.min_fidelity.map(|f| format!(", min fidelity {f:.6}")).unwrap_or_default()
    );
    println!("wrote {}", out.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct ValidateReport<'a> {
    schema_version: u32,
    generator: &'static str,
    command: &'static str,
    status: &'static str,
    name: &'a str,
    parameters: ParameterSummary,
}

/// Parses and validates without integrating; prints the resolved parameters.
pub fn validate(path: &Path) -> Result<(), CliError> {
    let s = scenario::load(path)?;
    let validity = modrabi::modulation::validity_report(&s.system, &s.drive, &s.thresholds)
        .map_err(|e| CliError::from_modulation("drive", e))?;
    if !validity.all_pass() {
        log::warn!("{}: approximation audit does not pass all checks", s.name);
    }
    let report = ValidateReport {
        schema_version: SCHEMA_VERSION,
        generator: GENERATOR,
        command: "validate",
        status: "ok",
        name: &s.name,
        parameters: ParameterSummary::new(&s.system, &s.drive, &s.effective, validity),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
