//! Bessel functions of the first kind for integer order.
//!
//! Ascending power series for `|x| ≤ 12`; above that, Miller's downward
//! recurrence normalized by `J₀ + 2ΣJ₂ₖ = 1`. Validated to `1e−12` absolute
//! on `|x| ≤ 50`.

use crate::scalar::Real;

use super::ModulationError;

/// Largest `|x|` with validated accuracy.
pub const BESSEL_MAX_ARG: f64 = 50.0;
const SERIES_LIMIT: f64 = 12.0;

/// First positive zero of `J₀`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// `Jₙ(x)` for `n ≥ 0`.
pub fn bessel_j<T: Real>(n: u32, x: T) -> Result<T, ModulationError> {
    let ax = x.abs();
    if !(ax.as_f64() <= BESSEL_MAX_ARG) {
        return Err(ModulationError::BesselDomain { x: x.as_f64() });
    }
    let value = if ax.as_f64() <= SERIES_LIMIT { series(n, ax) } else { miller(n, ax) };
    Ok(if x < T::zero() && n % 2 == 1 { -value } else { value })
}

/// `Jₙ(x)` for any integer order via `J₋ₙ = (−1)ⁿJₙ`.
pub fn bessel_j_signed<T: Real>(n: i32, x: T) -> Result<T, ModulationError> {
    let v = bessel_j(n.unsigned_abs(), x)?;
    Ok(if n < 0 && n % 2 != 0 { -v } else { v })
}

fn series<T: Real>(n: u32, x: T) -> T {
    let half = x * T::lit(0.5);
    // (x/2)^n / n!
    let mut term = T::one();
    for k in 1..=n {
        term = term * half / T::from_u32(k).unwrap();
    }
    let cutoff = T::lit(1e-15).max(T::epsilon() * T::lit(0.1));
    let q = half * half;
    let mut sum = term;
    let mut m = 1u32;
    loop {
        term = -term * q / (T::from_u32(m).unwrap() * T::from_u32(m + n).unwrap());
        sum = sum + term;
        // only stop once the terms are past their peak
        if T::from_u32(m).unwrap() > half && term.abs() < cutoff {
            break;
        }
        m += 1;
        if m > 500 {
            break;
        }
    }
    sum
}

fn miller<T: Real>(n: u32, x: T) -> T {
    let xf = x.as_f64();
    let top = (n as f64).max(xf);
    let mut start = (top + 30.0 + 2.0 * top.sqrt()) as u32;
    start += start % 2;

    let rescale = T::lit(1e10);
    let two = T::lit(2.0);
    let mut f_next = T::zero(); // f_{k+1}
    let mut f = T::lit(1e-30); // f_k
    let mut norm = T::zero();
    let mut target = T::zero();
    for k in (1..=start).rev() {
        let f_prev = two * T::from_u32(k).unwrap() / x * f - f_next;
        f_next = f;
        f = f_prev;
        let idx = k - 1;
        if idx == n {
            target = f;
        }
        if idx % 2 == 0 {
            norm = norm + if idx == 0 { f } else { two * f };
        }
        if f.abs() > rescale {
            let s = T::one() / rescale;
            f = f * s;
            f_next = f_next * s;
            norm = norm * s;
            target = target * s;
        }
    }
    target / norm
}
