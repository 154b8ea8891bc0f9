//! Explicit Runge–Kutta steppers on flat complex vectors.

use crate::scalar::{Real, C};

use super::DynamicsError;

/// Step-size control for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerances<T: Real> {
    pub rtol: T,
    pub atol: T,
    pub max_step: T,
    pub min_step: T,
}

/// Statistics accumulated over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evaluations: u64,
}

/// Scratch buffers shared by all stages.
pub(crate) struct Workspace<T: Real> {
    k: [Vec<C<T>>; 7],
    tmp: Vec<C<T>>,
    next: Vec<C<T>>,
}

impl<T: Real> Workspace<T> {
    pub fn new(len: usize) -> Self {
        let z = || vec![C::new(T::zero(), T::zero()); len];
        Self { k: [z(), z(), z(), z(), z(), z(), z()], tmp: z(), next: z() }
    }
}

#[inline]
fn combine<T: Real>(out: &mut [C<T>], y: &[C<T>], h: T, ks: &[(&[C<T>], f64)]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C::new(T::zero(), T::zero());
        for (k, w) in ks {
            if *w != 0.0 {
                acc = acc + k[i] * T::lit(*w);
            }
        }
        *o = y[i] + acc * h;
    }
}

/// Classical RK4 from `t0` to `t1` in `n` equal steps.
pub(crate) fn integrate_fixed<T: Real, F>(
    f: &mut F,
    y: &mut [C<T>],
    t0: T,
    t1: T,
    n: usize,
    ws: &mut Workspace<T>,
    stats: &mut StepStats,
) where
    F: FnMut(T, &[C<T>], &mut [C<T>]),
{
    let h = (t1 - t0) / T::from_usize(n).unwrap();
    let half = h * T::lit(0.5);
    let sixth = h / T::lit(6.0);
    for j in 0..n {
        let t = t0 + h * T::from_usize(j).unwrap();
        let [k1, k2, k3, k4, ..] = &mut ws.k;
        f(t, y, k1);
        for i in 0..y.len() {
            ws.tmp[i] = y[i] + k1[i] * half;
        }
        f(t + half, &ws.tmp, k2);
        for i in 0..y.len() {
            ws.tmp[i] = y[i] + k2[i] * half;
        }
        f(t + half, &ws.tmp, k3);
        for i in 0..y.len() {
            ws.tmp[i] = y[i] + k3[i] * h;
        }
        f(t + h, &ws.tmp, k4);
        let two = T::lit(2.0);
        for i in 0..y.len() {
            y[i] = y[i] + (k1[i] + (k2[i] + k3[i]) * two + k4[i]) * sixth;
        }
        stats.accepted += 1;
        stats.rhs_evaluations += 4;
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive Dormand–Prince from `t0` to exactly `t1`. `h` carries the step
/// size suggestion between calls.
#[allow(clippy::too_many_arguments)]
pub(crate) fn integrate_adaptive<T: Real, F>(
    f: &mut F,
    y: &mut [C<T>],
    t0: T,
    t1: T,
    h: &mut T,
    tol: &Tolerances<T>,
    ws: &mut Workspace<T>,
    stats: &mut StepStats,
) -> Result<(), DynamicsError>
where
    F: FnMut(T, &[C<T>], &mut [C<T>]),
{
    let mut t = t0;
    let n = y.len();
    while t < t1 {
        let mut step = h.min(tol.max_step).min(t1 - t);
        let last = step >= t1 - t;
        if step < tol.min_step && !last {
            return Err(DynamicsError::StepUnderflow { t: t.as_f64(), step: step.as_f64() });
        }
        if last {
            step = t1 - t;
        }
        let [k1, k2, k3, k4, k5, k6, k7] = &mut ws.k;
        f(t, y, k1);
        combine(&mut ws.tmp, y, step, &[(k1, A21)]);
        f(t + step * T::lit(C2), &ws.tmp, k2);
        combine(&mut ws.tmp, y, step, &[(k1, A31), (k2, A32)]);
        f(t + step * T::lit(C3), &ws.tmp, k3);
        combine(&mut ws.tmp, y, step, &[(k1, A41), (k2, A42), (k3, A43)]);
        f(t + step * T::lit(C4), &ws.tmp, k4);
        combine(&mut ws.tmp, y, step, &[(k1, A51), (k2, A52), (k3, A53), (k4, A54)]);
        f(t + step * T::lit(C5), &ws.tmp, k5);
        combine(&mut ws.tmp, y, step, &[(k1, A61), (k2, A62), (k3, A63), (k4, A64), (k5, A65)]);
        f(t + step, &ws.tmp, k6);
        combine(&mut ws.next, y, step, &[(k1, B1), (k3, B3), (k4, B4), (k5, B5), (k6, B6)]);
        f(t + step, &ws.next, k7);
        stats.rhs_evaluations += 7;

        let mut err = T::zero();
        for i in 0..n {
            let e = (k1[i] * T::lit(E1)
                + k3[i] * T::lit(E3)
                + k4[i] * T::lit(E4)
                + k5[i] * T::lit(E5)
                + k6[i] * T::lit(E6)
                + k7[i] * T::lit(E7))
                * step;
            let scale = tol.atol + tol.rtol * y[i].norm().max(ws.next[i].norm());
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            return Err(DynamicsError::NonFinite { t: t.as_f64() });
        }
        if err <= T::one() {
            t = if last { t1 } else { t + step };
            y.copy_from_slice(&ws.next);
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if err == T::zero() {
            T::lit(5.0)
        } else {
            (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
        };
        // keep the suggestion from the last full step rather than the clipped one
        if !(last && err <= T::one()) {
            *h = step * factor;
        }
        if *h < tol.min_step && t < t1 {
            return Err(DynamicsError::StepUnderflow { t: t.as_f64(), step: h.as_f64() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn oscillator(w: f64) -> impl FnMut(f64, &[C<f64>], &mut [C<f64>]) {
        move |_t, y, out| out[0] = cplx(0.0, -w) * y[0]
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        let exact = cplx(0.0, -3.0f64).exp();
        let mut errs = Vec::new();
        for &n in &[20usize, 40, 80] {
            let mut y = vec![cplx(1.0, 0.0)];
            let mut ws = Workspace::new(1);
            let mut stats = StepStats::default();
            integrate_fixed(&mut oscillator(3.0), &mut y, 0.0, 1.0, n, &mut ws, &mut stats);
            errs.push((y[0] - exact).norm());
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 4.0).abs() < 0.15, "observed order {order}");
        }
    }

    #[test]
    fn dopri_meets_tolerance() {
        let tol = Tolerances { rtol: 1e-10, atol: 1e-12, max_step: 1.0, min_step: 1e-14 };
        let mut y = vec![cplx(1.0, 0.0)];
        let mut ws = Workspace::new(1);
        let mut stats = StepStats::default();
        let mut h = 1e-3;
        integrate_adaptive(&mut oscillator(5.0), &mut y, 0.0, 4.0, &mut h, &tol, &mut ws, &mut stats).unwrap();
        assert!((y[0] - cplx(0.0, -20.0f64).exp()).norm() < 1e-8);
        assert!(stats.accepted > 10);
    }

    #[test]
    fn dopri_reports_underflow() {
        let tol = Tolerances { rtol: 1e-14, atol: 1e-300, max_step: 1.0, min_step: 1e-3 };
        let mut y = vec![cplx(1.0, 0.0)];
        let mut ws = Workspace::new(1);
        let mut stats = StepStats::default();
        let mut h = 0.5;
        let r = integrate_adaptive(&mut oscillator(50.0), &mut y, 0.0, 1.0, &mut h, &tol, &mut ws, &mut stats);
        assert!(matches!(r, Err(DynamicsError::StepUnderflow { .. })));
    }
}
