//! Cat-state preparation and the two-qubit gate of the reduced Dicke model,
//! in units where the effective resonator frequency is 1.

use std::path::Path;

use modrabi::applications::{
    cat_evolution, cnot_equivalence_check, conditional_cat, entangling_power, gate_at_period, magnus_phase,
    theta_from_ratio, ApplicationError, CnotCheck,
};
use modrabi::quantum::{QubitLevel, Truncation};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{write_json, Table};
use crate::report::GENERATOR;
use crate::scenario::SCHEMA_VERSION;

pub const CAT_MANIFEST: &str = "cat_manifest.json";
pub const CAT_PATH: &str = "cat_path.csv";
pub const CAT_FOCK: &str = "cat_fock.csv";
pub const GATE_MANIFEST: &str = "gate_manifest.json";

fn app_error(e: ApplicationError) -> CliError {
    match e {
        ApplicationError::ZeroProbability(_) => CliError::Numerical(e.to_string()),
        other => CliError::validation("applications", other),
    }
}

#[derive(Debug, Serialize)]
pub struct CatOutcome {
    pub probability: f64,
    pub ideal_probability: f64,
    pub xi_abs: f64,
    pub parity_leakage: f64,
}

#[derive(Debug, Serialize)]
pub struct CatManifest {
    pub schema_version: u32,
    pub generator: &'static str,
    pub command: &'static str,
    pub gratio: f64,
    pub omega_t: f64,
    pub fock_cutoff: usize,
    pub xi_re: f64,
    pub xi_im: f64,
    pub xi_abs: f64,
    pub phi: f64,
    pub truncation: Truncation<f64>,
    pub truncation_adequate: bool,
    pub even: Option<CatOutcome>,
    pub odd: Option<CatOutcome>,
    pub files: [&'static str; 2],
}

pub fn cat(gratio: f64, omega_t: f64, points: usize, cutoff: usize, out: &Path) -> Result<CatManifest, CliError> {
    if !gratio.is_finite() {
        return Err(CliError::validation("--gratio", "must be finite"));
    }
    if !(omega_t.is_finite() && omega_t >= 0.0) {
        return Err(CliError::validation("--omega-t", "must be finite and >= 0"));
    }
    if points < 2 {
        return Err(CliError::validation("--points", "need at least 2 points"));
    }
    if !(2..=400).contains(&cutoff) {
        return Err(CliError::validation("--cutoff", "must be in 2..=400"));
    }
    let mut path = Table::new(&["omega_t", "xi_re", "xi_im", "xi_abs", "phi", "p_even", "p_odd"]);
    for k in 0..points {
        let wt = omega_t * k as f64 / (points - 1) as f64;
        let p = magnus_phase(gratio, 1.0, wt).map_err(app_error)?;
        let overlap = (-2.0 * p.xi.norm_sqr()).exp();
        path.row(&[wt, p.xi.re, p.xi.im, p.xi.norm(), p.phi, 0.5 * (1.0 + overlap), 0.5 * (1.0 - overlap)]);
    }
    let (state, truncation) = cat_evolution(gratio, 1.0, omega_t, cutoff).map_err(app_error)?;
    let p = magnus_phase(gratio, 1.0, omega_t).map_err(app_error)?;
    let outcome = |level| match conditional_cat(&state, level) {
        Ok((c, prob)) => Ok(Some((
            CatOutcome {
                probability: prob,
                ideal_probability: c.ideal_probability(),
                xi_abs: c.xi.norm(),
                parity_leakage: c.parity_leakage(),
            },
            c.state.fock_populations(),
        ))),
        Err(ApplicationError::ZeroProbability(_)) => Ok(None),
        Err(e) => Err(app_error(e)),
    };
    let even = outcome(QubitLevel::Ground)?;
    let odd = outcome(QubitLevel::Excited)?;
    let mut fock = Table::new(&["fock", "even_population", "odd_population"]);
    for n in 0..cutoff {
        let pop = |c: &Option<(CatOutcome, Vec<f64>)>| c.as_ref().map_or(0.0, |(_, f)| f[n]);
        fock.row(&[n as f64, pop(&even), pop(&odd)]);
    }
    path.write(&out.join(CAT_PATH))?;
    fock.write(&out.join(CAT_FOCK))?;
    let manifest = CatManifest {
        schema_version: SCHEMA_VERSION,
        generator: GENERATOR,
        command: "applications cat",
        gratio,
        omega_t,
        fock_cutoff: cutoff,
        xi_re: p.xi.re,
        xi_im: p.xi.im,
        xi_abs: p.xi.norm(),
        phi: p.phi,
        truncation_adequate: truncation.is_adequate(),
        truncation,
        even: even.map(|(c, _)| c),
        odd: odd.map(|(c, _)| c),
        files: [CAT_PATH, CAT_FOCK],
    };
    write_json(&out.join(CAT_MANIFEST), &manifest)?;
    Ok(manifest)
}

#[derive(Debug, Serialize)]
pub struct GateManifest {
    pub schema_version: u32,
    pub generator: &'static str,
    pub command: &'static str,
    pub gratio: f64,
    pub theta: f64,
    pub entangling_power: f64,
    /// Row-major `[re, im]` entries in the `|b₁b₂⟩` basis (0 = g, 1 = e).
    pub gate: Vec<Vec<[f64; 2]>>,
    pub cnot: CnotCheck<f64>,
}

pub fn gate(gratio: f64, out: &Path) -> Result<GateManifest, CliError> {
    if !gratio.is_finite() {
        return Err(CliError::validation("--gratio", "must be finite"));
    }
    let u = gate_at_period(gratio, 1.0).map_err(app_error)?;
    let theta = theta_from_ratio(gratio);
    let m = u.matrix();
    let gate = (0..4).map(|r| (0..4).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect();
    let manifest = GateManifest {
        schema_version: SCHEMA_VERSION,
        generator: GENERATOR,
        command: "applications gate",
        gratio,
        theta,
        entangling_power: entangling_power(theta),
        gate,
        cnot: cnot_equivalence_check(&u).map_err(app_error)?,
    };
    write_json(&out.join(GATE_MANIFEST), &manifest)?;
    Ok(manifest)
}
