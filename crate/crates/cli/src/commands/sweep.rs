use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::output::{write_json, Table};
use crate::report::GENERATOR;
use crate::scenario::{self, check_sweep, set_path, SweepSpec, SCHEMA_VERSION};
use crate::simulate::{run, Storage};

use super::thread_pool;

pub const MANIFEST: &str = "sweep_manifest.json";
pub const TABLE: &str = "sweep.csv";
pub const COLUMNS: [&str; 4] = ["sweep_value", "time_s", "sigma_pop", "photon_number"];

#[derive(Debug, Clone, Serialize)]
pub struct PointError {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointSummary {
    pub index: usize,
    pub sweep_value: f64,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_photon_number: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_sigma_pop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<PointError>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mark {
    pub value: f64,
    pub nearest_index: usize,
    pub nearest_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepManifest {
    pub schema_version: u32,
    pub generator: &'static str,
    pub command: &'static str,
    pub status: &'static str,
    pub source: String,
    pub scenario: Value,
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub columns: Vec<&'static str>,
    pub file: &'static str,
    pub completed: usize,
    pub failed: usize,
    /// Sweep value with the largest peak photon number among completed points.
    pub argmax_peak_photon_number: Option<f64>,
    pub mark: Option<Mark>,
    pub results: Vec<PointSummary>,
}

/// One sweep point's time series.
#[derive(Debug, Clone)]
pub struct PointSeries {
    pub times: Vec<f64>,
    pub sigma_pop: Vec<f64>,
    pub photon_number: Vec<f64>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub manifest: SweepManifest,
    pub series: Vec<Option<PointSeries>>,
    pub first_error: Option<CliError>,
}

pub fn sweep_values(spec: &SweepSpec) -> Vec<f64> {
    let n = spec.points;
    (0..n)
        .map(|k| if k + 1 == n { spec.to } else { spec.from + (spec.to - spec.from) * k as f64 / (n - 1) as f64 })
        .collect()
}

fn run_point(base: &Value, param: &str, x: f64) -> Result<(PointSeries, f64, f64), CliError> {
    let mut v = base.clone();
    set_path(&mut v, param, x)?;
    let s = scenario::parse(v)?;
    let r = run(&s, Storage::ObservablesOnly)?;
    let column = |name: &str| {
        r.primary
            .get(name)
            .map(<[f64]>::to_vec)
            .ok_or_else(|| CliError::validation("outputs", format!("sweep needs `{name}` among the outputs")))
    };
    Ok((
        PointSeries { times: r.times.clone(), sigma_pop: column("sigma_pop")?, photon_number: column("photon_number")? },
        s.effective.coupling_ratio(),
        s.effective.lambda,
    ))
}

fn peak(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Evaluates every sweep point on the worker pool. Failed points are
/// recorded, not fatal; the caller decides how to report them.
pub fn run_sweep(base: &Value, source: &str, spec: &SweepSpec) -> Result<SweepOutcome, CliError> {
    check_sweep(spec, "sweep")?;
    // Validate the unmodified scenario first so structural errors surface once.
    let mut probe = base.clone();
    set_path(&mut probe, &spec.param, spec.from)?;
    scenario::parse(probe)?;

    let values = sweep_values(spec);
    let pool = thread_pool()?;
    let results: Vec<Result<(PointSeries, f64, f64), CliError>> =
        pool.install(|| values.par_iter().map(|&x| run_point(base, &spec.param, x)).collect());

    let mut summaries = Vec::with_capacity(values.len());
    let mut series = Vec::with_capacity(values.len());
    let mut first_error = None;
    for (index, (x, r)) in values.iter().zip(results).enumerate() {
        match r {
            Ok((p, ratio, lambda)) => {
                summaries.push(PointSummary {
                    index,
                    sweep_value: *x,
                    status: "ok",
                    coupling_ratio: Some(ratio),
                    lambda: Some(lambda),
                    peak_photon_number: Some(peak(&p.photon_number)),
                    peak_sigma_pop: Some(peak(&p.sigma_pop)),
                    error: None,
                });
                series.push(Some(p));
            }
            Err(e) => {
                log::error!("sweep point {index} ({} = {x}) failed: {e}", spec.param);
                summaries.push(PointSummary {
                    index,
                    sweep_value: *x,
                    status: "failed",
                    coupling_ratio: None,
                    lambda: None,
                    peak_photon_number: None,
                    peak_sigma_pop: None,
                    error: Some(PointError { kind: e.kind(), message: e.to_string() }),
                });
                series.push(None);
                first_error.get_or_insert(e);
            }
        }
    }
    let failed = summaries.iter().filter(|s| s.status != "ok").count();
    let argmax = summaries
        .iter()
        .filter_map(|s| s.peak_photon_number.map(|p| (s.sweep_value, p)))
        .fold(None, |best: Option<(f64, f64)>, (x, p)| match best {
            Some((_, bp)) if bp >= p => best,
            _ => Some((x, p)),
        })
        .map(|(x, _)| x);
    let mark = spec.mark.map(|m| {
        let (i, v) = values
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - m).abs().total_cmp(&(b.1 - m).abs()))
            .expect("at least two points");
        Mark { value: m, nearest_index: i, nearest_value: *v }
    });
    let manifest = SweepManifest {
        schema_version: SCHEMA_VERSION,
        generator: GENERATOR,
        command: "sweep",
        status: if failed == 0 { "ok" } else { "failed" },
        source: source.into(),
        scenario: base.clone(),
        param: spec.param.clone(),
        from: spec.from,
        to: spec.to,
        points: spec.points,
        columns: COLUMNS.to_vec(),
        file: TABLE,
        completed: values.len() - failed,
        failed,
        argmax_peak_photon_number: argmax,
        mark,
        results: summaries,
    };
    Ok(SweepOutcome { manifest, series, first_error })
}

/// Long-format table of every completed point, in sweep order.
pub fn table(outcome: &SweepOutcome) -> Table {
    let mut t = Table::new(&COLUMNS);
    for (summary, s) in outcome.manifest.results.iter().zip(&outcome.series) {
        if let Some(s) = s {
            for k in 0..s.times.len() {
                t.row(&[summary.sweep_value, s.times[k], s.sigma_pop[k], s.photon_number[k]]);
            }
        }
    }
    t
}

/// Command-line overrides of the scenario's own `sweep` block.
#[derive(Debug, Clone, Default)]
pub struct SweepArgs {
    pub param: Option<String>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub points: Option<usize>,
    pub mark: Option<f64>,
}

pub fn resolve_spec(base: &Value, args: &SweepArgs) -> Result<SweepSpec, CliError> {
    let from_file: Option<SweepSpec> = match base.get("sweep") {
        Some(v) => Some(
            serde_path_to_error::deserialize(v.clone())
                .map_err(|e| CliError::validation(format!("sweep.{}", e.path()), e.into_inner()))?,
        ),
        None => None,
    };
    let missing = |what: &str| CliError::validation(format!("--{what}"), "required (no `sweep` block in the scenario)");
    let spec = SweepSpec {
        param: match (&args.param, &from_file) {
            (Some(p), _) => p.clone(),
            (None, Some(f)) => f.param.clone(),
            (None, None) => return Err(missing("param")),
        },
        from: args.from.or(from_file.as_ref().map(|f| f.from)).ok_or_else(|| missing("from"))?,
        to: args.to.or(from_file.as_ref().map(|f| f.to)).ok_or_else(|| missing("to"))?,
        points: args.points.or(from_file.as_ref().map(|f| f.points)).ok_or_else(|| missing("points"))?,
        mark: args.mark.or(from_file.as_ref().and_then(|f| f.mark)),
    };
    check_sweep(&spec, "sweep")?;
    Ok(spec)
}

pub fn sweep(path: &Path, args: &SweepArgs, out: &Path) -> Result<(), CliError> {
    let base = scenario::read_value(path)?;
    let spec = resolve_spec(&base, args)?;
    let outcome = run_sweep(&base, &path.display().to_string(), &spec)?;
    table(&outcome).write(&out.join(TABLE))?;
    write_json(&out.join(MANIFEST), &outcome.manifest)?;
    let m = &outcome.manifest;
    println!("{} = {} .. {} ({} points): {} completed, {} failed", m.param, m.from, m.to, m.points, m.completed, m.failed);
    if let Some(x) = m.argmax_peak_photon_number {
        println!("largest peak photon number at {} = {x}", m.param);
    }
    println!("wrote {}", out.display());
    match outcome.first_error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
