use std::collections::BTreeMap;

use crate::hamiltonians::TimeDependentHamiltonian;
use crate::linalg::CMatrix;
use crate::quantum::{DensityMatrix, HilbertSpace, PureState};
use crate::scalar::{cplx, Real, C};

use super::dissipator::Dissipator;
use super::ode::{integrate_adaptive, integrate_fixed, StepStats, Tolerances, Workspace};
use super::{
    observables as obs, DynamicsError, IntegratorConfig, Method, StoredStates, TimeGrid, Trajectory, CUTOFF_LIMIT,
    POSITIVITY_FLOOR,
};

/// Diagonal weights of `Σᵢσᵢ₊σᵢ₋` and `a†a` in the product basis.
fn diagonal_weights<T: Real>(space: &HilbertSpace) -> (Vec<T>, Vec<T>) {
    (0..space.dim())
        .map(|i| {
            let (bits, n) = space.split(i);
            (T::from_u32(bits.count_ones()).unwrap(), T::from_usize(n).unwrap())
        })
        .unzip()
}

fn top_level_mask(space: &HilbertSpace) -> Vec<bool> {
    (0..space.dim()).map(|i| space.split(i).1 == space.fock_cutoff() - 1).collect()
}

/// Steps the ODE across the grid, calling `observe(k, t, y)` at stored points.
fn propagate<T: Real, F, O>(
    y: &mut [C<T>],
    grid: &TimeGrid<T>,
    cfg: &IntegratorConfig<T>,
    mut rhs: F,
    mut observe: O,
) -> Result<StepStats, DynamicsError>
where
    F: FnMut(T, &[C<T>], &mut [C<T>]),
    O: FnMut(usize, T, &mut [C<T>]) -> Result<(), DynamicsError>,
{
    cfg.validate()?;
    let times = grid.times();
    let last = times.len() - 1;
    let stored = |k: usize| k.is_multiple_of(cfg.store_every) || k == last;
    let mut ws = Workspace::new(y.len());
    let mut stats = StepStats::default();
    let span = times[last] - times[0];
    let mut h = cfg.max_step.unwrap_or(span).min(times[1] - times[0]) * T::lit(0.1);
    observe(0, times[0], y)?;
    for k in 1..=last {
        let (t0, t1) = (times[k - 1], times[k]);
        match cfg.method {
            Method::FixedRk4 { dt } => {
                let n = ((t1 - t0) / dt).ceil().to_usize().unwrap_or(1).max(1);
                integrate_fixed(&mut rhs, y, t0, t1, n, &mut ws, &mut stats);
            }
            Method::AdaptiveRk45 { rtol, atol } => {
                let tol = Tolerances {
                    rtol,
                    atol,
                    max_step: cfg.max_step.unwrap_or(t1 - t0),
                    min_step: T::epsilon() * T::lit(16.0) * times[last].abs().max(span),
                };
                integrate_adaptive(&mut rhs, y, t0, t1, &mut h, &tol, &mut ws, &mut stats)?;
            }
        }
        if y.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(DynamicsError::NonFinite { t: t1.as_f64() });
        }
        if stored(k) {
            observe(k, t1, y)?;
        }
    }
    Ok(stats)
}

/// `i d|ψ⟩/dt = H(t)|ψ⟩`. The norm is not renormalized; its drift shows up
/// in the `trace` series.
pub fn evolve_schrodinger<T: Real>(
    h: &TimeDependentHamiltonian<T>,
    psi0: &PureState<T>,
    grid: &TimeGrid<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<Trajectory<T>, DynamicsError> {
    let space = *h.space();
    space.check_same(psi0.space())?;
    let (qubit_w, photon_w) = diagonal_weights::<T>(&space);
    let top = top_level_mask(&space);
    let minus_i = cplx(T::zero(), -T::one());

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut series: BTreeMap<&'static str, Vec<T>> = BTreeMap::new();
    let mut cutoff_warning = None;

    let mut y = psi0.amplitudes().to_vec();
    let stats = propagate(
        &mut y,
        grid,
        cfg,
        |t, psi, out| h.apply_scaled(&h.coefficients_at(t), minus_i, psi, out),
        |_, t, psi| {
            let p: Vec<T> = psi.iter().map(|z| z.norm_sqr()).collect();
            let norm2 = p.iter().fold(T::zero(), |a, &x| a + x);
            let dot = |w: &[T]| p.iter().zip(w).fold(T::zero(), |a, (&x, &w)| a + x * w);
            let top_pop = p.iter().zip(&top).filter(|(_, &m)| m).fold(T::zero(), |a, (&x, _)| a + x);
            times.push(t);
            series.entry(obs::SIGMA_POP).or_default().push(dot(&qubit_w));
            series.entry(obs::PHOTON_NUMBER).or_default().push(dot(&photon_w));
            series.entry(obs::TRACE).or_default().push(norm2);
            series.entry(obs::PURITY).or_default().push(norm2 * norm2);
            series.entry(obs::TOP_FOCK_POP).or_default().push(top_pop);
            if cutoff_warning.is_none() && top_pop > T::lit(CUTOFF_LIMIT) {
                cutoff_warning = Some((t, top_pop));
            }
            if cfg.store_states {
                states.push(PureState::from_raw(space, psi.to_vec()));
            }
            Ok(())
        },
    )?;
    Ok(Trajectory {
        times,
        states: if cfg.store_states { StoredStates::Pure(states) } else { StoredStates::None },
        observables: series,
        stats,
        cutoff_warning,
    })
}

/// `dρ/dt = −i[H(t), ρ] + Σₖ Dₖ[ρ]`, integrated in matrix form.
///
/// ρ is symmetrized at stored points only. A minimum eigenvalue below
/// [`POSITIVITY_FLOOR`] aborts the run.
pub fn evolve_master<T: Real>(
    h: &TimeDependentHamiltonian<T>,
    dissipators: &[Dissipator<T>],
    rho0: &DensityMatrix<T>,
    grid: &TimeGrid<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<Trajectory<T>, DynamicsError> {
    let space = *h.space();
    space.check_same(rho0.space())?;
    for d in dissipators {
        space.check_same(d.jump_operator().space())?;
    }
    let dim = space.dim();
    let (qubit_w, photon_w) = diagonal_weights::<T>(&space);
    let top = top_level_mask(&space);
    let i = cplx(T::zero(), T::one());

    // K = H_static − (i/2) Σ r L†L carries the anticommutator terms.
    let mut k = h.static_part().clone();
    for d in dissipators {
        k.axpy(cplx(T::zero(), -d.rate() * T::lit(0.5)), &d.decay_operator());
    }
    let k_nz = k.nonzeros();
    let k_adj_nz = k.adjoint().nonzeros();
    let terms = h.driven_terms();
    let mut scratch = vec![C::new(T::zero(), T::zero()); dim * dim];

    let rhs = |t: T, rho: &[C<T>], out: &mut [C<T>]| {
        for o in out.iter_mut() {
            *o = C::new(T::zero(), T::zero());
        }
        k_nz.left_mul_raw(-i, rho, dim, out);
        k_adj_nz.right_mul_raw(i, rho, dim, out);
        for (term, c) in terms.iter().zip(h.coefficients_at(t)) {
            term.nz.left_mul_raw(-i * c, rho, dim, out);
            term.nz.right_mul_raw(i * c, rho, dim, out);
            if term.paired {
                term.nz_adjoint.left_mul_raw(-i * c.conj(), rho, dim, out);
                term.nz_adjoint.right_mul_raw(i * c.conj(), rho, dim, out);
            }
        }
        for d in dissipators {
            for z in scratch.iter_mut() {
                *z = C::new(T::zero(), T::zero());
            }
            d.nz.left_mul_raw(C::new(T::one(), T::zero()), rho, dim, &mut scratch);
            d.nz_adjoint.right_mul_raw(cplx(d.rate(), T::zero()), &scratch, dim, out);
        }
    };

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut series: BTreeMap<&'static str, Vec<T>> = BTreeMap::new();
    let mut cutoff_warning = None;

    let mut y = rho0.matrix().as_slice().to_vec();
    let stats = propagate(&mut y, grid, cfg, rhs, |_, t, rho| {
        let m = CMatrix::from_fn(dim, dim, |r, c| rho[r * dim + c]).hermitian_part();
        rho.copy_from_slice(m.as_slice());
        let diag: Vec<T> = (0..dim).map(|j| m[(j, j)].re).collect();
        let dot = |w: &[T]| diag.iter().zip(w).fold(T::zero(), |a, (&x, &w)| a + x * w);
        let trace = diag.iter().fold(T::zero(), |a, &x| a + x);
        let purity = m.as_slice().iter().fold(T::zero(), |a, z| a + z.norm_sqr());
        let top_pop = diag.iter().zip(&top).filter(|(_, &f)| f).fold(T::zero(), |a, (&x, _)| a + x);
        let eigs = m.hermitian_eigenvalues();
        if eigs.iter().any(|e| e.is_nan()) {
            return Err(DynamicsError::NonFinite { t: t.as_f64() });
        }
        let min_eig = eigs.first().copied().unwrap_or(0.0);
        if min_eig < POSITIVITY_FLOOR {
            return Err(DynamicsError::Positivity { t: t.as_f64(), min_eigenvalue: min_eig });
        }
        times.push(t);
        series.entry(obs::SIGMA_POP).or_default().push(dot(&qubit_w));
        series.entry(obs::PHOTON_NUMBER).or_default().push(dot(&photon_w));
        series.entry(obs::TRACE).or_default().push(trace);
        series.entry(obs::PURITY).or_default().push(purity);
        series.entry(obs::TOP_FOCK_POP).or_default().push(top_pop);
        series.entry(obs::MIN_EIGENVALUE).or_default().push(T::lit(min_eig));
        if cutoff_warning.is_none() && top_pop > T::lit(CUTOFF_LIMIT) {
            cutoff_warning = Some((t, top_pop));
        }
        if cfg.store_states {
            states.push(DensityMatrix::from_raw(space, m));
        }
        Ok(())
    })?;
    Ok(Trajectory {
        times,
        states: if cfg.store_states { StoredStates::Mixed(states) } else { StoredStates::None },
        observables: series,
        stats,
        cutoff_warning,
    })
}
