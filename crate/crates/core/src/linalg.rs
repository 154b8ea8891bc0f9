//! Dense complex matrices and the handful of kernels the simulator needs.
//!
//! Storage is row-major. Products skip exact zeros of one operand, which is
//! what keeps ladder-operator algebra cheap without a separate sparse type:
//! `a`, `σ±` and their products have at most one nonzero per row.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::scalar::{cone, czero, is_zero, Real, C};

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row slices; panics on ragged input.
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() }
    }

    /// Real-valued convenience constructor, mainly for small literal matrices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C::new(T::lit(x), T::zero())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [C<T>] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C<T> {
        self.diagonal().into_iter().fold(czero(), |acc, z| acc + z)
    }

    pub fn scale(&self, s: C<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: C<T>, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + s * b;
        }
    }

    /// Dense product, skipping zero entries of `self`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if is_zero(a) {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(czero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// Kronecker product `self ⊗ other` (row-major tensor indexing).
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest column sum of moduli.
    pub fn one_norm(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |s, i| s + self[(i, j)].norm()))
            .fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
    }

    /// Max entrywise modulus of `self − other`.
    pub fn distance(&self, other: &Self) -> T {
        (self - other).max_abs()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.distance(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.is_square() && self.adjoint().matmul(self).distance(&Self::identity(self.rows)) <= tol
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + adj[(i, j)]) * half)
    }

    pub(crate) fn nonzeros(&self) -> Nonzeros<T> {
        let mut entries = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !is_zero(z) {
                    entries.push((i, j, z));
                }
            }
        }
        Nonzeros { rows: self.rows, cols: self.cols, entries }
    }

    /// Solves `self · X = rhs` by LU with partial pivoting. `None` when singular.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert!(self.is_square(), "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows, "rhs row mismatch");
        let n = self.rows;
        let mut a = self.clone();
        let mut x = rhs.clone();
        let m = x.cols;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[(p, col)].norm().partial_cmp(&a[(q, col)].norm()).unwrap())
                .unwrap();
            if a[(pivot, col)].norm() == T::zero() {
                return None;
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                x.swap_rows(pivot, col);
            }
            let inv = cone::<T>() / a[(col, col)];
            for r in col + 1..n {
                let factor = a[(r, col)] * inv;
                if is_zero(factor) {
                    continue;
                }
                for c in col..n {
                    let v = a[(col, c)];
                    a[(r, c)] = a[(r, c)] - factor * v;
                }
                for c in 0..m {
                    let v = x[(col, c)];
                    x[(r, c)] = x[(r, c)] - factor * v;
                }
            }
        }
        for col in (0..n).rev() {
            let inv = cone::<T>() / a[(col, col)];
            for c in 0..m {
                let mut acc = x[(col, c)];
                for k in col + 1..n {
                    acc = acc - a[(col, k)] * x[(k, c)];
                }
                x[(col, c)] = acc * inv;
            }
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Matrix exponential by scaling and squaring with a degree-13 Padé
    /// approximant (Higham's coefficients).
    pub fn expm(&self) -> Self {
        assert!(self.is_square(), "expm needs a square matrix");
        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        const THETA_13: f64 = 5.371920351148152;
        let n = self.rows;
        let norm = self.one_norm().as_f64();
        let squarings = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
        let a = self.scale_real(T::lit(2f64.powi(-squarings)));
        let b = |k: usize| C::new(T::lit(B[k]), T::zero());

        let id = Self::identity(n);
        let a2 = a.matmul(&a);
        let a4 = a2.matmul(&a2);
        let a6 = a4.matmul(&a2);

        let mut inner_u = a6.scale(b(13));
        inner_u.axpy(b(11), &a4);
        inner_u.axpy(b(9), &a2);
        let mut u = a6.matmul(&inner_u);
        u.axpy(b(7), &a6);
        u.axpy(b(5), &a4);
        u.axpy(b(3), &a2);
        u.axpy(b(1), &id);
        let u = a.matmul(&u);

        let mut inner_v = a6.scale(b(12));
        inner_v.axpy(b(10), &a4);
        inner_v.axpy(b(8), &a2);
        let mut v = a6.matmul(&inner_v);
        v.axpy(b(6), &a6);
        v.axpy(b(4), &a4);
        v.axpy(b(2), &a2);
        v.axpy(b(0), &id);

        let denom = &v - &u;
        let numer = &v + &u;
        let mut r = denom.solve(&numer).expect("Padé denominator is nonsingular for scaled input");
        for _ in 0..squarings {
            r = r.matmul(&r);
        }
        r
    }

    /// Eigenvalues of a Hermitian matrix, ascending, computed in double precision.
    ///
    /// Entries below `ε²·max|a_ij|` are flushed to zero first: they cannot move any
    /// eigenvalue by more than round-off, and the QR sweeps can underflow to NaN on them.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square(), "eigenvalues need a square matrix");
        let n = self.rows;
        let scale = self.data.iter().fold(0.0f64, |a, z| a.max(z.norm().as_f64()));
        let floor = scale * f64::EPSILON * f64::EPSILON;
        let m = nalgebra::DMatrix::<nalgebra::Complex<f64>>::from_fn(n, n, |i, j| {
            // symmetrize so round-off asymmetry cannot leak into the solver
            let z = (self[(i, j)] + self[(j, i)].conj()) * T::lit(0.5);
            let z = nalgebra::Complex::new(z.re.as_f64(), z.im.as_f64());
            if z.norm() < floor {
                nalgebra::Complex::new(0.0, 0.0)
            } else {
                z
            }
        });
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn add(self, rhs: Self) -> CMatrix<T> {
        let mut out = self.clone();
        out.axpy(cone(), rhs);
        out
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn sub(self, rhs: Self) -> CMatrix<T> {
        let mut out = self.clone();
        out.axpy(-cone::<T>(), rhs);
        out
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

/// Coordinate list of the nonzero entries of a matrix. Used by the
/// integrators to apply ladder-type operators in `O(nnz · d)`.
#[derive(Debug, Clone)]
pub(crate) struct Nonzeros<T: Real> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, C<T>)>,
}

impl<T: Real> Nonzeros<T> {
    /// `out += s · A v`.
    pub fn apply_vec(&self, s: C<T>, v: &[C<T>], out: &mut [C<T>]) {
        for &(i, k, a) in &self.entries {
            out[i] = out[i] + s * a * v[k];
        }
    }

    /// `out += s · A B` for dense `B`.
    #[cfg(test)]
    pub fn left_mul(&self, s: C<T>, b: &CMatrix<T>, out: &mut CMatrix<T>) {
        debug_assert_eq!(self.cols, b.rows);
        debug_assert_eq!((out.rows, out.cols), (self.rows, b.cols));
        self.left_mul_raw(s, &b.data, b.cols, &mut out.data);
    }

    /// `out += s · B A` for dense `B`.
    #[cfg(test)]
    pub fn right_mul(&self, s: C<T>, b: &CMatrix<T>, out: &mut CMatrix<T>) {
        debug_assert_eq!(b.cols, self.rows);
        debug_assert_eq!((out.rows, out.cols), (b.rows, self.cols));
        self.right_mul_raw(s, &b.data, b.rows, &mut out.data);
    }

    /// `out += s · A B` on row-major slices; `B` has `cols` columns.
    pub fn left_mul_raw(&self, s: C<T>, b: &[C<T>], cols: usize, out: &mut [C<T>]) {
        for &(i, k, a) in &self.entries {
            let f = s * a;
            let src = &b[k * cols..(k + 1) * cols];
            let dst = &mut out[i * cols..(i + 1) * cols];
            for (o, &x) in dst.iter_mut().zip(src) {
                *o = *o + f * x;
            }
        }
    }

    /// `out += s · B A` on row-major slices; `B` has `rows` rows
    /// and `self.rows` columns, `out` has `self.cols` columns.
    pub fn right_mul_raw(&self, s: C<T>, b: &[C<T>], rows: usize, out: &mut [C<T>]) {
        let (bcols, ocols) = (self.rows, self.cols);
        for &(k, j, a) in &self.entries {
            let f = s * a;
            for i in 0..rows {
                let x = b[i * bcols + k];
                out[i * ocols + j] = out[i * ocols + j] + x * f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn sigma_x() -> CMatrix<f64> {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    #[test]
    fn expm_of_rotation_generator() {
        // exp(-iθσx) = cos θ I − i sin θ σx
        let theta = 0.7_f64;
        let g = sigma_x().scale(cplx(0.0, -theta));
        let expected = &CMatrix::identity(2).scale(cplx(theta.cos(), 0.0))
            + &sigma_x().scale(cplx(0.0, -theta.sin()));
        assert!(g.expm().distance(&expected) < 1e-14);
    }

    #[test]
    fn expm_matches_taylor_series_on_large_norm() {
        // Taylor oracle with exact scaling by 2^k and repeated squaring.
        let a = CMatrix::<f64>::from_fn(4, 4, |i, j| cplx((i as f64 - j as f64) * 0.9, (i * j) as f64 * 0.4 - 1.0));
        assert!(a.one_norm() > 5.0 && a.one_norm() < 20.0);
        let k = 10;
        let small = a.scale_real(2f64.powi(-k));
        let mut term = CMatrix::identity(4);
        let mut sum = CMatrix::identity(4);
        for m in 1..30 {
            term = term.matmul(&small).scale_real(1.0 / m as f64);
            sum = &sum + &term;
        }
        for _ in 0..k {
            sum = sum.matmul(&sum);
        }
        let e = a.expm();
        let rel = e.distance(&sum) / sum.max_abs();
        assert!(rel < 1e-12, "relative error {rel}");
    }

    #[test]
    fn expm_of_zero_and_diagonal() {
        let z = CMatrix::<f64>::zeros(3, 3);
        assert!(z.expm().distance(&CMatrix::identity(3)) < 1e-15);
        let d = CMatrix::from_diagonal(&[cplx(1.0f64, 0.0), cplx(0.0, 2.0), cplx(-3.0, 0.5)]);
        let e = d.expm();
        for (i, z) in d.diagonal().into_iter().enumerate() {
            assert!((e[(i, i)] - z.exp()).norm() < 1e-13 * z.exp().norm().max(1.0));
        }
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = CMatrix::<f64>::from_fn(5, 5, |i, j| cplx(1.0 / (1.0 + i as f64 + j as f64), (i as f64 - j as f64) * 0.1));
        let x = CMatrix::from_fn(5, 2, |i, j| cplx(i as f64, j as f64 - 0.5));
        let b = a.matmul(&x);
        assert!(a.solve(&b).unwrap().distance(&x) < 1e-9);
        assert!(CMatrix::<f64>::zeros(2, 2).solve(&CMatrix::identity(2)).is_none());
    }

    #[test]
    fn kron_uses_row_major_ordering() {
        let x = sigma_x();
        let id = CMatrix::<f64>::identity(2);
        let xi = x.kron(&id);
        // |0,1> -> |1,1>: index 1 -> 3
        assert_eq!(xi[(3, 1)], cplx(1.0, 0.0));
        assert_eq!(xi[(2, 1)], cplx(0.0, 0.0));
    }

    #[test]
    fn sparse_kernels_agree_with_dense_products() {
        let a = CMatrix::<f64>::from_fn(4, 4, |i, j| if j == i + 1 { cplx(j as f64, 0.5) } else { cplx(0.0, 0.0) });
        let b = CMatrix::from_fn(4, 4, |i, j| cplx(i as f64 - 1.0, j as f64 * 0.25));
        let s = cplx(0.3, -1.2);
        let nz = a.nonzeros();
        let mut left = CMatrix::zeros(4, 4);
        nz.left_mul(s, &b, &mut left);
        assert!(left.distance(&a.matmul(&b).scale(s)) < 1e-14);
        let mut right = CMatrix::zeros(4, 4);
        nz.right_mul(s, &b, &mut right);
        assert!(right.distance(&b.matmul(&a).scale(s)) < 1e-14);
        let v: Vec<_> = (0..4).map(|i| cplx(i as f64, 1.0)).collect();
        let mut out = vec![cplx(0.0, 0.0); 4];
        nz.apply_vec(s, &v, &mut out);
        let dense: Vec<_> = a.mul_vec(&v).into_iter().map(|z| z * s).collect();
        for (x, y) in out.iter().zip(&dense) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_x() {
        let ev = sigma_x().hermitian_eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let g = CMatrix::<f32>::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).scale_real(0.5);
        let e = g.expm();
        assert!((e[(0, 0)].re - 0.5f32.cos()).abs() < 1e-6);
        assert!(e.is_unitary(1e-6));
    }
}
