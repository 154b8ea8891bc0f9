use serde::Serialize;

use crate::quantum::{DensityMatrix, PureState, QuantumError};
use crate::scalar::{Real, C};

use super::DynamicsError;

/// `F = |⟨ψ|ρ|ψ⟩|`, clamped to `[0, 1]`.
pub fn fidelity<T: Real>(psi: &PureState<T>, rho: &DensityMatrix<T>) -> Result<T, QuantumError> {
    psi.space().check_same(rho.space())?;
    let v = psi.amplitudes();
    let m = rho.matrix();
    let mut acc = C::new(T::zero(), T::zero());
    for (i, vi) in v.iter().enumerate() {
        let row = m.row(i);
        let mut inner = C::new(T::zero(), T::zero());
        for (rij, vj) in row.iter().zip(v) {
            inner = inner + rij * vj;
        }
        acc = acc + vi.conj() * inner;
    }
    Ok(acc.norm().min(T::one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodEstimate<T: Real> {
    /// Mean spacing of consecutive maxima (s).
    pub period: T,
    /// Largest minus smallest spacing (s).
    pub spread: T,
    pub maxima: usize,
}

/// Oscillation period from the spacing of maxima.
///
/// Each complete excursion above the midline `(min + max)/2` (entered from
/// below and left again) contributes one maximum, refined by a parabola
/// through the sample and its neighbours. Small fast ripples riding on the
/// main oscillation are not counted.
pub fn extract_period<T: Real>(times: &[T], values: &[T]) -> Result<PeriodEstimate<T>, DynamicsError> {
    if times.len() != values.len() || times.len() < 5 {
        return Err(DynamicsError::NoOscillation("need at least 5 samples of equal-length series".into()));
    }
    let (lo, hi) = values.iter().fold((T::infinity(), T::neg_infinity()), |(a, b), &v| (a.min(v), b.max(v)));
    if !(hi - lo > T::tol(1e-12) * hi.abs().max(T::one())) {
        return Err(DynamicsError::NoOscillation("series is flat".into()));
    }
    // hysteresis band around the midline so ripples near a crossing do not
    // split one excursion into several
    let mid = (lo + hi) * T::lit(0.5);
    let band = (hi - lo) * T::lit(0.1);
    let mut peaks = Vec::new();
    let mut seen_low = false;
    let mut current: Option<usize> = None;
    for (k, &v) in values.iter().enumerate() {
        match current {
            None => {
                if v < mid - band {
                    seen_low = true;
                } else if v > mid + band && seen_low {
                    current = Some(k);
                }
            }
            Some(best) => {
                if v < mid - band {
                    peaks.push(refine(times, values, best));
                    current = None;
                } else if v > values[best] {
                    current = Some(k);
                }
            }
        }
    }
    if peaks.len() < 2 {
        return Err(DynamicsError::NoOscillation(format!("found {} complete maxima, need 2", peaks.len())));
    }
    let gaps: Vec<T> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
    let count = T::from_usize(gaps.len()).unwrap();
    let period = (peaks[peaks.len() - 1] - peaks[0]) / count;
    let (gmin, gmax) = gaps.iter().fold((T::infinity(), T::neg_infinity()), |(a, b), &g| (a.min(g), b.max(g)));
    Ok(PeriodEstimate { period, spread: gmax - gmin, maxima: peaks.len() })
}

fn refine<T: Real>(times: &[T], values: &[T], j: usize) -> T {
    if j == 0 || j + 1 >= values.len() {
        return times[j];
    }
    let (y0, y1, y2) = (values[j - 1], values[j], values[j + 1]);
    let denom = y0 - T::lit(2.0) * y1 + y2;
    if denom >= T::zero() {
        return times[j];
    }
    let offset = T::lit(0.5) * (y0 - y2) / denom;
    // non-uniform grids: interpolate within the neighbouring interval
    if offset >= T::zero() {
        times[j] + offset * (times[j + 1] - times[j])
    } else {
        times[j] + offset * (times[j] - times[j - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{HilbertSpace, QubitLevel};

    #[test]
    fn fidelity_limits() {
        let space = HilbertSpace::qubit_resonator(3).unwrap();
        let g0 = PureState::<f64>::basis(&space, &[QubitLevel::Ground], 0).unwrap();
        let g1 = PureState::<f64>::basis(&space, &[QubitLevel::Ground], 1).unwrap();
        assert_eq!(fidelity(&g0, &g0.to_density()).unwrap(), 1.0);
        assert_eq!(fidelity(&g0, &g1.to_density()).unwrap(), 0.0);
        let mixed = DensityMatrix::new(
            &space,
            &g0.to_density().matrix().scale_real(0.5) + &g1.to_density().matrix().scale_real(0.5),
        )
        .unwrap();
        assert!((fidelity(&g0, &mixed).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn period_of_sine_squared() {
        let w = 2.0 * std::f64::consts::PI * 3.7;
        let times: Vec<f64> = (0..2000).map(|k| k as f64 * 1e-3).collect();
        let values: Vec<f64> = times.iter().map(|t| (w * t / 2.0).sin().powi(2)).collect();
        let est = extract_period(&times, &values).unwrap();
        let expected = 2.0 * std::f64::consts::PI / w;
        assert!((est.period / expected - 1.0).abs() < 5e-3, "{est:?}");
        assert!(est.maxima >= 6);
    }

    #[test]
    fn ripples_do_not_count() {
        let times: Vec<f64> = (0..12000).map(|k| k as f64 * 1e-3).collect();
        let values: Vec<f64> =
            times.iter().map(|t| (2.0 * t).cos() + 0.02 * (400.0 * t).sin()).collect();
        let est = extract_period(&times, &values).unwrap();
        assert!((est.period / std::f64::consts::PI - 1.0).abs() < 0.01, "{est:?}");
    }

    #[test]
    fn flat_series_rejected() {
        let times: Vec<f64> = (0..100).map(|k| k as f64).collect();
        assert!(matches!(extract_period(&times, &vec![0.3; 100]), Err(DynamicsError::NoOscillation(_))));
    }
}
