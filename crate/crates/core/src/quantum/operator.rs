use std::ops::{Add, Mul, Sub};

use crate::linalg::CMatrix;
use crate::scalar::{cone, cplx, czero, Real, C};

use super::{HilbertSpace, QuantumError};

/// Dense operator on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T: Real> {
    space: HilbertSpace,
    matrix: CMatrix<T>,
}

/// Single-qubit operator kinds. `σ₊ = |e⟩⟨g|`, `σz|e⟩ = +|e⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliKind {
    Z,
    X,
    Y,
    Raise,
    Lower,
}

impl<T: Real> Operator<T> {
    pub fn new(space: HilbertSpace, matrix: CMatrix<T>) -> Result<Self, QuantumError> {
        if matrix.rows() != space.dim() || matrix.cols() != space.dim() {
            return Err(QuantumError::DimensionMismatch { left: space.dim(), right: matrix.rows() });
        }
        Ok(Self { space, matrix })
    }

    pub fn zero(space: HilbertSpace) -> Self {
        Self { space, matrix: CMatrix::zeros(space.dim(), space.dim()) }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        Self { space, matrix: CMatrix::identity(space.dim()) }
    }

    #[inline]
    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space, matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { space: self.space, matrix: self.matrix.scale(s) }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self { space: self.space, matrix: self.matrix.scale_real(s) }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        debug_assert_eq!(self.space, other.space);
        Self { space: self.space, matrix: self.matrix.commutator(&other.matrix) }
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.matrix.is_unitary(tol)
    }

    pub fn expm(&self) -> Self {
        Self { space: self.space, matrix: self.matrix.expm() }
    }

    /// Max entrywise modulus of the difference.
    pub fn distance(&self, other: &Self) -> T {
        self.matrix.distance(&other.matrix)
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        self.matrix.mul_vec(v)
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator { space: self.space, matrix: &self.matrix + &rhs.matrix }
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator { space: self.space, matrix: &self.matrix - &rhs.matrix }
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator { space: self.space, matrix: self.matrix.matmul(&rhs.matrix) }
    }
}

/// `N × N` annihilation matrix: `⟨m−1|a|m⟩ = √m`.
pub(crate) fn ladder_matrix<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            cplx(T::from_usize(j).unwrap().sqrt(), T::zero())
        } else {
            czero()
        }
    })
}

pub(crate) fn pauli_matrix<T: Real>(kind: PauliKind) -> CMatrix<T> {
    // basis (|g⟩, |e⟩)
    let (o, l, i) = (czero::<T>(), cone::<T>(), cplx(T::zero(), T::one()));
    let rows = match kind {
        PauliKind::Z => vec![vec![-l, o], vec![o, l]],
        PauliKind::X => vec![vec![o, l], vec![l, o]],
        PauliKind::Y => vec![vec![o, i], vec![-i, o]],
        PauliKind::Raise => vec![vec![o, o], vec![l, o]],
        PauliKind::Lower => vec![vec![o, l], vec![o, o]],
    };
    CMatrix::from_rows(&rows)
}

/// Embeds a resonator-factor matrix as `I_qubits ⊗ m`.
pub(crate) fn embed_resonator<T: Real>(space: &HilbertSpace, m: &CMatrix<T>) -> CMatrix<T> {
    CMatrix::identity(space.qubit_dim()).kron(m)
}

/// Embeds a single-qubit matrix on qubit `q`, identity elsewhere.
pub(crate) fn embed_qubit<T: Real>(space: &HilbertSpace, q: usize, m: &CMatrix<T>) -> CMatrix<T> {
    let n = space.n_qubits();
    let mut acc = CMatrix::identity(1);
    for k in 0..n {
        let factor = if k == q { m.clone() } else { CMatrix::identity(2) };
        acc = acc.kron(&factor);
    }
    acc.kron(&CMatrix::identity(space.fock_cutoff()))
}

pub fn annihilation<T: Real>(space: &HilbertSpace) -> Result<Operator<T>, QuantumError> {
    space.require_resonator()?;
    Ok(Operator { space: *space, matrix: embed_resonator(space, &ladder_matrix(space.fock_cutoff())) })
}

pub fn creation<T: Real>(space: &HilbertSpace) -> Result<Operator<T>, QuantumError> {
    Ok(annihilation(space)?.adjoint())
}

/// `a†a`, diagonal with entries `0..N−1` on the resonator factor.
pub fn number<T: Real>(space: &HilbertSpace) -> Result<Operator<T>, QuantumError> {
    space.require_resonator()?;
    let diag: Vec<C<T>> = (0..space.dim())
        .map(|i| cplx(T::from_usize(space.split(i).1).unwrap(), T::zero()))
        .collect();
    Ok(Operator { space: *space, matrix: CMatrix::from_diagonal(&diag) })
}

pub fn qubit_operator<T: Real>(
    space: &HilbertSpace,
    which_qubit: usize,
    kind: PauliKind,
) -> Result<Operator<T>, QuantumError> {
    space.check_qubit(which_qubit)?;
    Ok(Operator { space: *space, matrix: embed_qubit(space, which_qubit, &pauli_matrix(kind)) })
}

/// Sum of a single-qubit operator over all qubits: `J± = Σσᵢ±`, `Jx = Σσᵢx`,
/// and `Jz = ½[J₊, J₋] = ½Σσᵢz` for `PauliKind::Z`.
pub fn collective<T: Real>(space: &HilbertSpace, kind: PauliKind) -> Operator<T> {
    let mut acc = Operator::zero(*space);
    for q in 0..space.n_qubits() {
        let m = embed_qubit(space, q, &pauli_matrix(kind));
        acc.matrix.axpy(cone(), &m);
    }
    if kind == PauliKind::Z {
        acc = acc.scale_real(T::lit(0.5));
    }
    acc
}

/// Tail-mass diagnostic attached to coherent constructions on a truncated space.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Truncation<T: Real> {
    /// Population of the top Fock level for the ideal coherent state `|ξ⟩`.
    pub tail_population: T,
    /// `|ξ|²` relative to the cutoff.
    pub mean_photons: T,
    pub fock_cutoff: usize,
}

impl<T: Real> Truncation<T> {
    pub const TAIL_LIMIT: f64 = 1e-8;

    /// Poisson weight of level `N−1` for amplitude `|ξ|`, evaluated in log space.
    pub fn for_amplitude(modulus: T, fock_cutoff: usize) -> Self {
        let r2 = (modulus * modulus).as_f64();
        let top = (fock_cutoff - 1) as f64;
        let tail = if r2 == 0.0 {
            if fock_cutoff == 1 { 1.0 } else { 0.0 }
        } else {
            let ln_fact: f64 = (1..fock_cutoff).map(|k| (k as f64).ln()).sum();
            (-r2 + top * r2.ln() - ln_fact).exp()
        };
        Self { tail_population: T::lit(tail), mean_photons: T::lit(r2), fock_cutoff }
    }

    pub fn is_adequate(&self) -> bool {
        self.tail_population.as_f64() <= Self::TAIL_LIMIT
            && self.mean_photons.as_f64() <= self.fock_cutoff as f64 / 4.0
    }
}

/// `exp(ξ a† − ξ* a)` on the resonator factor of `space`.
///
/// Never fails on large `ξ`; inspect the returned [`Truncation`].
pub fn displacement<T: Real>(
    space: &HilbertSpace,
    xi: C<T>,
) -> Result<(Operator<T>, Truncation<T>), QuantumError> {
    space.require_resonator()?;
    let d = displacement_matrix(space.fock_cutoff(), xi);
    let diag = Truncation::for_amplitude(xi.norm(), space.fock_cutoff());
    if !diag.is_adequate() {
        log::warn!(
            "displacement |xi|^2 = {} with cutoff {}: top-level tail {:e}",
            diag.mean_photons,
            space.fock_cutoff(),
            diag.tail_population.as_f64()
        );
    }
    Ok((Operator { space: *space, matrix: embed_resonator(space, &d) }, diag))
}

pub(crate) fn displacement_matrix<T: Real>(fock_cutoff: usize, xi: C<T>) -> CMatrix<T> {
    let a = ladder_matrix::<T>(fock_cutoff);
    let mut generator = a.adjoint().scale(xi);
    generator.axpy(-xi.conj(), &a);
    generator.expm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{expectation, PureState};

    fn space(n: usize, cutoff: usize) -> HilbertSpace {
        HilbertSpace::new(n, cutoff).unwrap()
    }

    #[test]
    fn two_level_ladder_matrix() {
        let r = HilbertSpace::resonator(2).unwrap();
        let a = annihilation::<f64>(&r).unwrap();
        assert_eq!(a.matrix(), &CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
        let ad = creation::<f64>(&r).unwrap();
        assert_eq!(ad.matrix(), &a.matrix().adjoint());
    }

    #[test]
    fn truncated_commutator_diagonal() {
        let r = HilbertSpace::resonator(4).unwrap();
        let a = annihilation::<f64>(&r).unwrap();
        let c = a.commutator(&a.adjoint());
        let expected = CMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -3.0],
        ]);
        assert!(c.matrix().distance(&expected) < 1e-14);
    }

    #[test]
    fn number_operator_spectrum() {
        let s = space(1, 6);
        let n = number::<f64>(&s).unwrap();
        let a = annihilation::<f64>(&s).unwrap();
        assert!(n.distance(&(&a.adjoint() * &a)) < 1e-14);
        let ev = n.matrix().hermitian_eigenvalues();
        for (k, pair) in ev.chunks(2).enumerate() {
            assert!((pair[0] - k as f64).abs() < 1e-12 && (pair[1] - k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_algebra() {
        let s = space(1, 3);
        let sp = qubit_operator::<f64>(&s, 0, PauliKind::Raise).unwrap();
        let sm = qubit_operator::<f64>(&s, 0, PauliKind::Lower).unwrap();
        let sx = qubit_operator::<f64>(&s, 0, PauliKind::X).unwrap();
        let sz = qubit_operator::<f64>(&s, 0, PauliKind::Z).unwrap();
        assert!(sx.distance(&(&sp + &sm)) < 1e-15);
        // σ₊σ₋ = |e⟩⟨e| = (1 + σz)/2
        let proj = (&Operator::identity(s) + &sz).scale_real(0.5);
        assert!((&sp * &sm).distance(&proj) < 1e-15);
        let e0 = PureState::<f64>::basis(&s, &[crate::quantum::QubitLevel::Excited], 0).unwrap();
        assert!((expectation(&sz, &e0).unwrap().re - 1.0).abs() < 1e-15);
        assert!(qubit_operator::<f64>(&s, 1, PauliKind::X).is_err());
    }

    #[test]
    fn collective_jx_two_qubits_spectrum() {
        let q = HilbertSpace::qubits_only(2).unwrap();
        let jx = collective::<f64>(&q, PauliKind::X);
        let ev = jx.matrix().hermitian_eigenvalues();
        let expected = [-2.0, 0.0, 0.0, 2.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let jp = collective::<f64>(&q, PauliKind::Raise);
        let jm = collective::<f64>(&q, PauliKind::Lower);
        let jz = collective::<f64>(&q, PauliKind::Z);
        assert!(jp.commutator(&jm).scale_real(0.5).distance(&jz) < 1e-14);
    }

    #[test]
    fn displacement_identity_and_unitarity() {
        let s = space(1, 20);
        let (d0, _) = displacement::<f64>(&s, cplx(0.0, 0.0)).unwrap();
        assert!(d0.distance(&Operator::identity(s)) < 1e-15);
        let xi = cplx(0.6, -0.3);
        let (d, diag) = displacement::<f64>(&s, xi).unwrap();
        assert!(diag.is_adequate());
        assert!(d.is_unitary(1e-12));
        let (dm, _) = displacement::<f64>(&s, -xi).unwrap();
        assert!((&d * &dm).distance(&Operator::identity(s)) < 1e-9);
    }

    #[test]
    fn displacement_photon_statistics() {
        // Poisson oracle: ⟨a†a⟩ = |ξ|² for a coherent state.
        let s = HilbertSpace::resonator(32).unwrap();
        let xi = C::from_polar(1.0, 0.4);
        let (d, _) = displacement::<f64>(&s, xi).unwrap();
        let vac = PureState::<f64>::vacuum(&s).unwrap();
        let psi = vac.evolve(&d).unwrap();
        let n = expectation(&number(&s).unwrap(), &psi).unwrap();
        assert!((n.re - 1.0).abs() < 1e-6);
        let back = psi.evolve(&displacement::<f64>(&s, -xi).unwrap().0).unwrap();
        assert!((vac.inner(&back).unwrap().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn truncation_diagnostic_flags_large_amplitude() {
        let small = Truncation::<f64>::for_amplitude(1.0, 30);
        assert!(small.is_adequate());
        let big = Truncation::<f64>::for_amplitude(4.0, 20);
        assert!(!big.is_adequate());
        // e^{-1}/ (29)! is tiny; log-space must not underflow to NaN
        assert!(small.tail_population.is_finite());
    }
}
