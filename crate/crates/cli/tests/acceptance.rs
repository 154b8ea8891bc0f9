//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::time::Instant;

use modrabi::applications::{
    cat_evolution, cnot_equivalence_check, conditional_cat, entangling_power, gate_at_period, magnus_phase,
    magnus_propagator, theta_from_ratio,
};
use modrabi::dynamics::{
    evolve_master, evolve_schrodinger, extract_period, observables as obs, Dissipator, IntegratorConfig, TimeGrid,
};
use modrabi::hamiltonians::{model, reduced_dicke_hamiltonian, Descriptor, FramePhases, ModelKind, TimeDependentHamiltonian};
use modrabi::modulation::{angular, detunings, effective_params, DriveParams, SystemParams};
use modrabi::quantum::{HilbertSpace, Operator, PureState, QubitLevel};
use modrabi::scalar::{cone, czero};
use modrabi_cli::commands::sweep::run_sweep;
use modrabi_cli::scenario::{self, read_value, Integrator, ModelChoice, Scenario};
use modrabi_cli::simulate::{run, Storage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DISSIPATIVE: [&str; 7] = ["fig2a", "fig2d", "fig3a", "fig3d", "fig4jc", "fig4ajc", "fig5"];

type Outcome = Result<String, String>;

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn load(name: &str) -> Scenario {
    scenario::load(&scenario_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn drive_ghz(o1: f64, a1: f64, o2: f64, a2: f64) -> DriveParams<f64> {
    DriveParams::from_amplitudes(angular(o1 * 1e9), angular(a1 * 1e9), angular(o2 * 1e9), angular(a2 * 1e9)).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn verdict(pass: bool, detail: String) -> Outcome {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn effective_ratios() -> Outcome {
    let sys = SystemParams::reference_device();
    let cases = [(6.759, 4.849, 0.05), (7.516, 5.392, 0.5), (7.558, 5.422, 1.0), (7.565, 5.427, 1.2)];
    let mut worst = 0.0f64;
    let mut got = Vec::new();
    for (o2, a2, want) in cases {
        let eff = effective_params(&sys, &drive_ghz(3.2, 2.296, o2, a2)).unwrap();
        let r = eff.coupling_ratio();
        got.push(format!("{r:.4}"));
        worst = worst.max(rel(r, want));
    }
    verdict(worst < 0.01, format!("|g/w| = [{}], worst rel. error {worst:.2e} (tol 1e-2)", got.join(", ")))
}

fn sideband_detunings() -> Outcome {
    let sys = SystemParams::reference_device();
    let cases = [(6.759, 840.7e6), (7.516, 84.07e6), (7.558, 42.03e6), (7.565, 35.03e6)];
    let mut worst = 0.0f64;
    let mut delta1_zero = true;
    for (o2, want) in cases {
        let d = detunings(&sys, &drive_ghz(3.2, 2.296, o2, 0.0));
        worst = worst.max(rel(d.delta2 / TAU, want));
        delta1_zero &= d.delta1 == 0.0;
    }
    verdict(
        worst < 0.01 && delta1_zero,
        format!("delta2 worst rel. error {worst:.2e} (tol 1e-2); delta1 exactly zero: {delta1_zero}"),
    )
}

fn jc_suppression() -> Outcome {
    let sys = SystemParams::<f64>::reference_device();
    let (o1, o2) = (angular(3.2e9), angular(7.565e9));
    let jc = effective_params(&sys, &DriveParams::new(o1, o2, 1.2024, 0.7173, 0.0, 0.0).unwrap()).unwrap();
    let ajc = effective_params(&sys, &DriveParams::new(o1, o2, 0.7173, 1.2024, 0.0, 0.0).unwrap()).unwrap();
    let cr_leak = jc.g_cr.abs() / sys.g;
    let r_leak = ajc.g_r.abs() / sys.g;
    let ratio = jc.rotating_ratio();
    let pass = cr_leak < 5e-4 && r_leak < 5e-4 && rel(ratio, 1.137) < 0.005;
    verdict(
        pass,
        format!("JC |g_cr|/g = {cr_leak:.2e}, anti-JC |g_r|/g = {r_leak:.2e} (tol 5e-4); JC |g_r/w| = {ratio:.4} (1.137 +- 0.5%)"),
    )
}

fn full_vs_effective() -> Outcome {
    let mut s = load("fig2a");
    s.dissipation = false;
    s.model = ModelChoice::Both;
    s.fock_cutoff = 30;
    s.integrator = Integrator::FixedPointsPerPeriod(40);
    s.t_end = 3.0 * s.effective.effective_period();
    let r = run(&s, Storage::Auto).map_err(|e| e.to_string())?;
    let f = r.diagnostics.min_fidelity.ok_or("no fidelity computed")?;
    verdict(f >= 0.98, format!("min fidelity over 3 effective periods = {f:.6} (floor 0.98)"))
}

fn period_of(s: &Scenario) -> Result<(f64, f64), String> {
    let r = run(s, Storage::ObservablesOnly).map_err(|e| e.to_string())?;
    let p = extract_period(&r.times, r.primary.get(obs::SIGMA_POP).ok_or("sigma_pop missing")?)
        .map_err(|e| e.to_string())?;
    Ok((p.period, r.times.len() as f64))
}

fn rabi_periods() -> Outcome {
    let exact = |mut s: Scenario| {
        s.dissipation = false;
        s.model = ModelChoice::RotatedExact;
        s
    };
    let jc = exact(load("fig4jc"));
    let (p_jc, _) = period_of(&jc)?;
    let want_jc = PI / jc.effective.g_r.abs();

    let mut det = exact(load("fig4jc"));
    let delta1 = angular::<f64>(10e6);
    det.drive = DriveParams::new(
        det.drive.omega1 + delta1,
        det.drive.omega2,
        det.drive.eta1,
        det.drive.eta2,
        det.drive.phi1,
        det.drive.phi2,
    )
    .unwrap();
    det.effective = effective_params(&det.system, &det.drive).unwrap();
    let (p_det, _) = period_of(&det)?;
    let g = det.effective.g_r;
    let want_det = TAU / (4.0 * g * g + delta1 * delta1).sqrt();

    let ajc = exact(load("fig4ajc"));
    let (p_ajc, _) = period_of(&ajc)?;
    let (gcr, d2) = (ajc.effective.g_cr, ajc.effective.delta2());
    let want_ajc = TAU / (4.0 * gcr * gcr + d2 * d2).sqrt();

    let errs = [rel(p_jc, want_jc), rel(p_det, want_det), rel(p_ajc, want_ajc)];
    verdict(
        errs.iter().all(|e| *e < 0.02),
        format!(
            "rel. period errors: JC {:.2e}, detuned JC {:.2e}, anti-JC {:.2e} (tol 2e-2)",
            errs[0], errs[1], errs[2]
        ),
    )
}

fn anti_jc_symmetry() -> Outcome {
    let s = load("fig4ajc");
    let space = HilbertSpace::qubit_resonator(s.fock_cutoff).unwrap();
    // the shipped drive leaves |g_r| ~ 1e-4 |g_cr|; the anti-JC model drops it
    let h = model(ModelKind::AntiJc, &s.effective, &space, 1e-3).map_err(|e| e.to_string())?;
    let psi = PureState::basis(&space, &[QubitLevel::Ground], 0).unwrap();
    let grid = TimeGrid::uniform(s.t_end, 2001).unwrap();
    let traj = evolve_schrodinger(&h, &psi, &grid, &IntegratorConfig::adaptive(1e-11, 1e-13)).map_err(|e| e.to_string())?;
    let n = traj.series(obs::PHOTON_NUMBER).unwrap();
    let q = traj.series(obs::SIGMA_POP).unwrap();
    let worst = n.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let peak = n.iter().copied().fold(0.0, f64::max);
    verdict(worst < 1e-8, format!("max |<n> - <s+s->| = {worst:.2e} (tol 1e-8), peak <n> = {peak:.3}"))
}

/// Largest entrywise deviation of the closed-form propagator from fine-step
/// integration over input columns with at most `max_fock` photons.
fn magnus_distance(n_qubits: usize, max_fock: usize) -> f64 {
    let cutoff = 40;
    let space = HilbertSpace::new(n_qubits, cutoff).unwrap();
    let (g, omega) = (0.25, 1.0);
    let t = TAU / omega;
    let h = reduced_dicke_hamiltonian(g, omega, &space).unwrap();
    let (u, _) = magnus_propagator(g, omega, t, &space).unwrap();
    let grid = TimeGrid::new(vec![0.0, t]).unwrap();
    let cfg = IntegratorConfig::fixed(1e-3);
    let mut worst = 0.0f64;
    for bits in 0..space.qubit_dim() {
        for n in 0..=max_fock {
            let col = space.index(bits, n);
            let mut amps = vec![czero(); space.dim()];
            amps[col] = cone();
            let psi = PureState::new(&space, amps).unwrap();
            let traj = evolve_schrodinger(&h, &psi, &grid, &cfg).unwrap();
            let out = &traj.pure_states().unwrap()[1];
            for r in 0..space.dim() {
                worst = worst.max((u.matrix()[(r, col)] - out.amplitudes()[r]).norm());
            }
        }
    }
    worst
}

fn magnus_exactness() -> Outcome {
    let d: Vec<f64> = [1, 2].iter().map(|&n| magnus_distance(n, 10)).collect();
    let half: Vec<f64> = [1, 2].iter().map(|&n| magnus_distance(n, 20)).collect();
    let full: Vec<f64> = [1, 2].iter().map(|&n| magnus_distance(n, 39)).collect();
    verdict(
        d.iter().all(|x| *x < 1e-6),
        format!(
            "max entrywise distance, inputs n <= 10: N=1 {:.2e}, N=2 {:.2e} (tol 1e-6); \
             n <= 20: {:.2e}, {:.2e}; all inputs: {:.2e}, {:.2e} (truncation edge)",
            d[0], d[1], half[0], half[1], full[0], full[1]
        ),
    )
}

fn cat_formulas() -> Outcome {
    let omega = 1.0;
    let mut xi_err = 0.0f64;
    let mut prob_err = 0.0f64;
    let mut leak = 0.0f64;
    for ratio in [0.1, 0.25, 0.5, 1.0] {
        let g = ratio * omega;
        let t = PI / omega;
        let analytic = magnus_phase(g, omega, t).unwrap().xi.norm();
        let (psi, _) = cat_evolution(g, omega, t, 60).map_err(|e| e.to_string())?;
        let (even, pg) = conditional_cat(&psi, QubitLevel::Ground).map_err(|e| e.to_string())?;
        let (odd, pe) = conditional_cat(&psi, QubitLevel::Excited).map_err(|e| e.to_string())?;
        let want = 2.0 * ratio;
        xi_err = xi_err.max(rel(analytic, want)).max(rel(even.xi.norm(), want)).max(rel(odd.xi.norm(), want));
        let x2 = want * want;
        prob_err = prob_err.max((pg - (1.0 + (-2.0 * x2).exp()) / 2.0).abs()).max((pe - (1.0 - (-2.0 * x2).exp()) / 2.0).abs());
        leak = leak.max(even.parity_leakage()).max(odd.parity_leakage());
    }
    verdict(
        xi_err < 1e-6 && prob_err < 1e-8 && leak < 1e-10,
        format!("|xi| rel. error {xi_err:.2e} (1e-6), probability error {prob_err:.2e} (1e-8), cross-parity {leak:.2e} (1e-10)"),
    )
}

fn gate_claims() -> Outcome {
    let ep = entangling_power(theta_from_ratio(0.25f64));
    let check = cnot_equivalence_check(&gate_at_period(0.25, 1.0).unwrap()).map_err(|e| e.to_string())?;
    verdict(
        ep == 2.0 / 9.0 && check.matches && check.residual < 1e-9,
        format!(
            "e_p = {ep} (2/9 = {}); CNOT residual {:.2e} (tol 1e-9), {:?} ordering, control qubit {}",
            2.0 / 9.0,
            check.residual,
            check.ordering,
            check.control + 1
        ),
    )
}

fn decay_errors() -> (f64, f64) {
    let space = HilbertSpace::qubit_resonator(3).unwrap();
    let h = TimeDependentHamiltonian::constant(Operator::zero(space), Descriptor::Custom).unwrap();
    let cfg = IntegratorConfig::adaptive(1e-10, 1e-12);
    let only_resonator = SystemParams { kappa: 0.0, ..SystemParams::<f64>::reference_device() };
    let rho = PureState::basis(&space, &[QubitLevel::Ground], 1).unwrap().to_density();
    let grid = TimeGrid::uniform(3.0 / only_resonator.gamma, 31).unwrap();
    let diss = Dissipator::standard(&only_resonator, &space).unwrap();
    let traj = evolve_master(&h, &diss, &rho, &grid, &cfg).unwrap();
    let photon = traj
        .times
        .iter()
        .zip(traj.series(obs::PHOTON_NUMBER).unwrap())
        .map(|(t, n)| (n - (-only_resonator.gamma * t).exp()).abs())
        .fold(0.0, f64::max);

    let only_qubit = SystemParams { gamma: 0.0, ..SystemParams::<f64>::reference_device() };
    let rho = PureState::basis(&space, &[QubitLevel::Excited], 0).unwrap().to_density();
    let grid = TimeGrid::uniform(3.0 / only_qubit.kappa, 31).unwrap();
    let diss = Dissipator::standard(&only_qubit, &space).unwrap();
    let traj = evolve_master(&h, &diss, &rho, &grid, &cfg).unwrap();
    let qubit = traj
        .times
        .iter()
        .zip(traj.series(obs::SIGMA_POP).unwrap())
        .map(|(t, p)| (p - (-only_qubit.kappa * t).exp()).abs())
        .fold(0.0, f64::max);
    (photon, qubit)
}

fn frame_invariance(s: &Scenario, rng: &mut ChaCha8Rng) -> f64 {
    let space = HilbertSpace::qubit_resonator(4).unwrap();
    let frame = FramePhases::new(&s.system, &s.drive, &s.effective, &space);
    let mut worst = 0.0f64;
    for d in Dissipator::standard(&s.system, &space).unwrap() {
        let reference = d.superoperator();
        let scale = reference.max_abs();
        for _ in 0..100 {
            let t = rng.gen_range(0.0..s.t_end);
            let moved = d.transformed(&frame, t).unwrap();
            worst = worst.max(moved.superoperator().distance(&reference) / scale);
        }
    }
    worst
}

fn open_system_integrity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut drift = 0.0f64;
    let mut min_eig = f64::INFINITY;
    let mut frame = 0.0f64;
    for name in DISSIPATIVE {
        let s = load(name);
        if !s.dissipation {
            return Err(format!("{name} is not dissipative"));
        }
        let r = run(&s, Storage::ObservablesOnly).map_err(|e| format!("{name}: {e}"))?;
        drift = drift.max(r.diagnostics.trace_drift);
        min_eig = min_eig.min(r.diagnostics.min_eigenvalue.ok_or("no eigenvalues")?);
        frame = frame.max(frame_invariance(&s, &mut rng));
    }
    let (photon, qubit) = decay_errors();
    // frame phases reach ~1e3 rad, so rounding in the transformed operator sits near 1e-13 relative
    let pass = drift < 1e-8 && min_eig >= -1e-6 && photon < 1e-6 && qubit < 1e-6 && frame < 1e-11;
    verdict(
        pass,
        format!(
            "{} scenarios: trace drift {drift:.2e} (1e-8), min eigenvalue {min_eig:.2e} (>= -1e-6); \
             decay errors e^-gt {photon:.2e}, e^-kt {qubit:.2e} (1e-6); frame-invariance rel. distance {frame:.2e} at 100 random times",
            DISSIPATIVE.len()
        ),
    )
}

fn degenerate_sweep() -> Outcome {
    let path = scenario_path("fig5");
    let value = read_value(&path).map_err(|e| e.to_string())?;
    let spec = load("fig5").sweep.ok_or("fig5 has no sweep block")?;
    let out = run_sweep(&value, &path.display().to_string(), &spec).map_err(|e| e.to_string())?;
    if let Some(e) = out.first_error {
        return Err(e.to_string());
    }
    let m = &out.manifest;
    let arg = m.argmax_peak_photon_number.ok_or("no completed points")?;
    let zero = m.results.iter().min_by(|a, b| a.sweep_value.abs().total_cmp(&b.sweep_value.abs())).unwrap();
    let excitation = zero.peak_photon_number.unwrap_or(f64::NAN).max(zero.peak_sigma_pop.unwrap_or(f64::NAN));
    verdict(
        (0.65..=0.78).contains(&arg) && excitation < 1e-3,
        format!(
            "argmax peak <n> at eta2 = {arg:.4} (window [0.65, 0.78]); at eta2 = {} peak excitation {excitation:.2e} (tol 1e-3)",
            zero.sweep_value
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("effective-parameter reproduction", effective_ratios),
        ("sideband resonance arithmetic", sideband_detunings),
        ("JC/anti-JC suppression", jc_suppression),
        ("full vs effective agreement", full_vs_effective),
        ("Rabi periods", rabi_periods),
        ("anti-JC symmetry", anti_jc_symmetry),
        ("Magnus exactness", magnus_exactness),
        ("cat-state formulas", cat_formulas),
        ("gate claims", gate_claims),
        ("open-system integrity", open_system_integrity),
        ("degenerate AQRM sweep", degenerate_sweep),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1} s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1} s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
