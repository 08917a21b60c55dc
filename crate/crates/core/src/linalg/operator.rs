//! Dense square complex matrices.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, re, Real};

use super::state::StateVector;

/// Dense `dim × dim` complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T: Real = f64> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out[(i, i)] = re(T::one());
        }
        out
    }

    /// Builds an operator from row-major entries, checking shape and finiteness.
    pub fn from_row_major(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::Shape { what: "operator", expected: dim * dim, found: entries.len() });
        }
        if !entries.iter().all(is_finite) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Shape { what: "operator row", expected: dim, found: row.len() });
            }
            entries.extend(row);
        }
        Self::from_row_major(dim, entries)
    }

    /// Real-valued rows, convenient for tests and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| re(T::lit(x))).collect()).collect())
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out[(i, i)] = re(d);
        }
        out
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = columns.len();
        let mut out = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::Shape { what: "operator column", expected: dim, found: col.len() });
            }
            for (i, z) in col.iter().enumerate() {
                out[(i, j)] = *z;
            }
        }
        Self::from_row_major(dim, out.entries)
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &StateVector<T>, b: &StateVector<T>) -> Result<Self> {
        Self::outer_raw(a.amplitudes(), b.amplitudes())
    }

    pub(crate) fn outer_raw(a: &[Complex<T>], b: &[Complex<T>]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { op: "outer", left: a.len(), right: b.len() });
        }
        let dim = a.len();
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] = a[i] * b[j].conj();
            }
        }
        Ok(out)
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("static")
    }

    pub fn pauli_y() -> Self {
        let i = Complex::new(T::zero(), T::one());
        Self::from_rows(vec![vec![re(T::zero()), -i], vec![i, re(T::zero())]]).expect("static")
    }

    pub fn pauli_z() -> Self {
        Self::from_diagonal(&[T::one(), -T::one()])
    }

    /// Controlled-NOT on two qubits with the first factor as control.
    pub fn cnot() -> Self {
        Self::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .expect("static")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex<T>]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(re(T::zero()), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.entries.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| *z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(re(s))
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// Applies the matrix to a raw amplitude slice.
    pub fn apply_raw(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        debug_assert_eq!(v.len(), self.dim);
        self.rows().map(|row| row.iter().zip(v).fold(re(T::zero()), |acc, (a, b)| acc + *a * *b)).collect()
    }

    pub fn apply(&self, v: &StateVector<T>) -> Result<Vec<Complex<T>>> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { op: "apply", left: self.dim, right: v.dim() });
        }
        Ok(self.apply_raw(v.amplitudes()))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { op: "multiply", left: self.dim, right: rhs.dim });
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.entries[k * n + j];
                    out.entries[i * n + j] += a * b;
                }
            }
        }
        out
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Self { dim: self.dim, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(*a, *b)).collect() }
    }

    /// `U† A U`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.adjoint().try_mul(&self.try_mul(u)?)
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_residual(&self) -> T {
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖A + A†‖_F`.
    pub fn anti_hermiticity_residual(&self) -> T {
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] + self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖A†A − I‖_F`.
    pub fn unitarity_residual(&self) -> T {
        (&self.adjoint().mul_unchecked(self) - &Self::identity(self.dim)).frobenius_norm()
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(T::lit(0.5))
    }

    /// Anti-Hermitian part `(A − A†)/2`.
    pub fn anti_hermitian_part(&self) -> Self {
        (self - &self.adjoint()).scale_real(T::lit(0.5))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(is_finite)
    }

    /// Lossy conversion between scalar types.
    pub fn cast<U: Real>(&self) -> Operator<U> {
        Operator {
            dim: self.dim,
            entries: self.entries.iter().map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))).collect(),
        }
    }
}

/// Kronecker product with system-major index convention:
/// joint index `(i, j) ↦ i·b.dim + j`.
pub fn tensor_product<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Operator<T> {
    let (n, m) = (a.dim, b.dim);
    let d = n * m;
    let mut out = Operator::zeros(d);
    for i in 0..n {
        for k in 0..n {
            let aik = a[(i, k)];
            for j in 0..m {
                for l in 0..m {
                    out.entries[(i * m + j) * d + (k * m + l)] = aik * b[(j, l)];
                }
            }
        }
    }
    out
}

/// `ab − ba`.
pub fn commutator<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { op: "commutator", left: a.dim, right: b.dim });
    }
    Ok(&a.mul_unchecked(b) - &b.mul_unchecked(a))
}

impl<T: Real> Index<(usize, usize)> for Operator<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.entries[i * self.dim + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Operator<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.entries[i * self.dim + j]
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: Self) -> Operator<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: Self) -> Operator<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;
    /// Panics on dimension mismatch; use [`Operator::try_mul`] for a checked product.
    fn mul(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl<T: Real> Neg for &Operator<T> {
    type Output = Operator<T>;
    fn neg(self) -> Operator<T> {
        self.scale_real(-T::one())
    }
}
