use serde::Serialize;

use crate::scalar::{cis, Real, C};

use super::bessel::bessel_j_signed;
use super::params::{Detunings, DriveParams};
use super::ModulationError;

/// One Jacobi–Anger term `coefficient · e^{i·frequency·t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidebandTerm<T: Real> {
    pub n1: i32,
    pub n2: i32,
    pub coefficient: C<T>,
    /// Signed exponent frequency: `+Ω₋(n)` for α, `−Ω₊(n)` for β.
    pub frequency: T,
}

/// The double series multiplying `g·aσ₊` (α) and `g·aσ₋` (β) in the frame
/// co-rotating with the bare and modulated qubit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SidebandSeries<T: Real> {
    pub order: u32,
    pub alpha: Vec<SidebandTerm<T>>,
    pub beta: Vec<SidebandTerm<T>>,
}

impl<T: Real> SidebandSeries<T> {
    /// Indices of the near-resonant terms kept by the rotating-wave approximation.
    pub const RETAINED_ALPHA: (i32, i32) = (-1, 0);
    pub const RETAINED_BETA: (i32, i32) = (0, -1);

    pub fn alpha_term(&self, n1: i32, n2: i32) -> Option<&SidebandTerm<T>> {
        self.alpha.iter().find(|t| t.n1 == n1 && t.n2 == n2)
    }

    pub fn beta_term(&self, n1: i32, n2: i32) -> Option<&SidebandTerm<T>> {
        self.beta.iter().find(|t| t.n1 == n1 && t.n2 == n2)
    }

    pub fn alpha_at(&self, t: T) -> C<T> {
        sum_at(&self.alpha, t)
    }

    pub fn beta_at(&self, t: T) -> C<T> {
        sum_at(&self.beta, t)
    }
}

fn sum_at<T: Real>(terms: &[SidebandTerm<T>], t: T) -> C<T> {
    terms.iter().fold(C::new(T::zero(), T::zero()), |acc, term| acc + term.coefficient * cis(term.frequency * t))
}

/// Expands `e^{±2iS(t)}` to `|n₁|, |n₂| ≤ order`.
pub fn sideband_amplitudes<T: Real>(
    drive: &DriveParams<T>,
    det: &Detunings<T>,
    order: u32,
) -> Result<SidebandSeries<T>, ModulationError> {
    if order == 0 {
        return Err(ModulationError::InvalidParameter { field: "order", reason: "must be >= 1".into() });
    }
    let two = T::lit(2.0);
    let nb = order as i32;
    let j1: Vec<T> = (-nb..=nb).map(|n| bessel_j_signed(n, two * drive.eta1)).collect::<Result<_, _>>()?;
    let j2: Vec<T> = (-nb..=nb).map(|n| bessel_j_signed(n, two * drive.eta2)).collect::<Result<_, _>>()?;
    let len = j1.len() * j2.len();
    let mut alpha = Vec::with_capacity(len);
    let mut beta = Vec::with_capacity(len);
    for (i1, n1) in (-nb..=nb).enumerate() {
        for (i2, n2) in (-nb..=nb).enumerate() {
            let amp = j1[i1] * j2[i2];
            let phase = T::from_i32(n1).unwrap() * drive.phi1 + T::from_i32(n2).unwrap() * drive.phi2;
            let shift = T::from_i32(n1).unwrap() * drive.omega1 + T::from_i32(n2).unwrap() * drive.omega2;
            alpha.push(SidebandTerm { n1, n2, coefficient: cis(phase) * amp, frequency: det.delta_minus + shift });
            beta.push(SidebandTerm { n1, n2, coefficient: cis(-phase) * amp, frequency: -(det.delta_plus + shift) });
        }
    }
    Ok(SidebandSeries { order, alpha, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::{angular, detunings, effective_params, SystemParams};

    fn fig2a() -> (SystemParams<f64>, DriveParams<f64>) {
        let sys = SystemParams::reference_device();
        let drive = DriveParams::from_amplitudes(
            angular(3.2e9),
            angular(2.296e9),
            angular(6.759e9),
            angular(4.849e9),
        )
        .unwrap();
        (sys, drive)
    }

    #[test]
    fn undriven_series_is_single_term() {
        let (sys, mut drive) = fig2a();
        drive.eta1 = 0.0;
        drive.eta2 = 0.0;
        let det = detunings(&sys, &drive);
        let s = sideband_amplitudes(&drive, &det, 3).unwrap();
        for term in s.alpha.iter().chain(&s.beta) {
            let expected = if term.n1 == 0 && term.n2 == 0 { 1.0 } else { 0.0 };
            assert_eq!(term.coefficient.re, expected);
            assert_eq!(term.coefficient.im, 0.0);
        }
        assert_eq!(s.alpha_term(0, 0).unwrap().frequency, det.delta_minus);
        assert_eq!(s.beta_term(0, 0).unwrap().frequency, -det.delta_plus);
        let t = 1.3e-9;
        assert!((s.alpha_at(t) - cis(det.delta_minus * t)).norm() < 1e-15);
    }

    #[test]
    fn dominant_terms_reproduce_effective_couplings() {
        let (sys, mut drive) = fig2a();
        drive.phi1 = 0.4;
        drive.phi2 = -1.1;
        let det = detunings(&sys, &drive);
        let eff = effective_params(&sys, &drive).unwrap();
        let s = sideband_amplitudes(&drive, &det, 5).unwrap();
        let a = s.alpha_term(-1, 0).unwrap();
        assert!((a.coefficient * sys.g - cis(-drive.phi1) * eff.g_r).norm() < 1e-6);
        assert!((a.frequency + det.delta1).abs() < 1e-3);
        let b = s.beta_term(0, -1).unwrap();
        assert!((b.coefficient * sys.g - cis(drive.phi2) * eff.g_cr).norm() < 1e-6);
        assert!((b.frequency + det.delta2).abs() < 1e-3);
    }

    #[test]
    fn completeness_of_bessel_weights() {
        for &(e1, e2) in &[(0.7173, 0.7173), (1.3, 0.2), (1.2024, 1.3)] {
            let (sys, mut drive) = fig2a();
            drive.eta1 = e1;
            drive.eta2 = e2;
            let det = detunings(&sys, &drive);
            let s = sideband_amplitudes(&drive, &det, 20).unwrap();
            let total: f64 = s.alpha.iter().map(|t| t.coefficient.norm_sqr()).sum();
            assert!((total - 1.0).abs() < 1e-8, "{total}");
        }
    }

    #[test]
    fn series_sums_to_exact_phase_factor() {
        let (sys, drive) = fig2a();
        let det = detunings(&sys, &drive);
        let s = sideband_amplitudes(&drive, &det, 20).unwrap();
        for k in 0..20 {
            let t = 1e-11 * k as f64;
            let two_s = 2.0 * drive.phase_modulation(t);
            let exact_a = cis(det.delta_minus * t + two_s);
            let exact_b = cis(-det.delta_plus * t - two_s);
            assert!((s.alpha_at(t) - exact_a).norm() < 1e-10);
            assert!((s.beta_at(t) - exact_b).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_order_rejected() {
        let (sys, drive) = fig2a();
        assert!(sideband_amplitudes(&drive, &detunings(&sys, &drive), 0).is_err());
    }
}
