//! Jacobi-type spectral routines: Hermitian eigensystems and singular values.
//!
//! Both use cyclic sweeps of complex plane rotations. They are accurate to a
//! few ulps relative to `‖A‖` and deterministic, which the rank and grouping
//! thresholds downstream depend on. Cost is cubic per sweep; fine for the
//! desk-scale dimensions handled here.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{re, Real};

use super::operator::Operator;
use super::state::StateVector;
use super::tolerance::ToleranceConfig;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigensystem<T: Real = f64> {
    pub values: Vec<T>,
    pub vectors: Vec<StateVector<T>>,
}

impl<T: Real> Eigensystem<T> {
    /// Matrix whose columns are the eigenvectors.
    pub fn vector_matrix(&self) -> Operator<T> {
        let cols: Vec<Vec<Complex<T>>> = self.vectors.iter().map(|v| v.amplitudes().to_vec()).collect();
        Operator::from_columns(&cols).expect("square by construction")
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> Complex<T>) -> Operator<T> {
        let n = self.values.len();
        let mut out = Operator::zeros(n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            let w = f(*lambda);
            let a = v.amplitudes();
            for i in 0..n {
                let ai = a[i] * w;
                for j in 0..n {
                    out[(i, j)] += ai * a[j].conj();
                }
            }
        }
        out
    }
}

/// Rotation `J` with `J_pp = c`, `J_pq = s`, `J_qp = −s·conj(φ)`, `J_qq = c·conj(φ)`
/// that zeroes the `(p, q)` entry of the Hermitian 2×2 block
/// `[[app, apq], [conj(apq), aqq]]` under `J† A J`.
#[derive(Clone, Copy)]
struct Rotation<T: Real> {
    c: T,
    s: T,
    phase: Complex<T>,
}

impl<T: Real> Rotation<T> {
    fn new(app: T, aqq: T, apq: Complex<T>) -> Self {
        let mag = apq.norm();
        let phase = apq.unscale(mag);
        let theta = (aqq - app) / (T::lit(2.0) * mag);
        let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
        let c = T::one() / (t * t + T::one()).sqrt();
        Self { c, s: t * c, phase }
    }

    fn entries(&self) -> [Complex<T>; 4] {
        let pc = self.phase.conj();
        [re(self.c), re(self.s), pc * re(-self.s), pc * re(self.c)]
    }
}

/// `A ← A J` on columns `p`, `q` of an `rows × n` row-major block.
fn rotate_columns<T: Real>(a: &mut [Complex<T>], n: usize, p: usize, q: usize, rot: &Rotation<T>) {
    let [jpp, jpq, jqp, jqq] = rot.entries();
    for row in a.chunks_mut(n) {
        let (x, y) = (row[p], row[q]);
        row[p] = x * jpp + y * jqp;
        row[q] = x * jpq + y * jqq;
    }
}

/// `A ← J† A` on rows `p`, `q` of an `n × n` row-major matrix.
fn rotate_rows<T: Real>(a: &mut [Complex<T>], n: usize, p: usize, q: usize, rot: &Rotation<T>) {
    let [jpp, jpq, jqp, jqq] = rot.entries();
    for k in 0..n {
        let (x, y) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = jpp.conj() * x + jqp.conj() * y;
        a[q * n + k] = jpq.conj() * x + jqq.conj() * y;
    }
}

/// Eigen-decomposition of a Hermitian operator.
pub fn hermitian_eigensystem<T: Real>(a: &Operator<T>, tol: &ToleranceConfig<T>) -> Result<Eigensystem<T>> {
    let residual = a.hermiticity_residual();
    if residual > tol.hermiticity {
        return Err(Error::NotHermitian { residual: residual.as_f64() });
    }
    Ok(jacobi_eigen(&a.hermitian_part()))
}

fn jacobi_eigen<T: Real>(h: &Operator<T>) -> Eigensystem<T> {
    let n = h.dim();
    let mut a = h.entries().to_vec();
    let mut v = Operator::<T>::identity(n).entries().to_vec();
    let scale = h.frobenius_norm();
    let eps = T::epsilon();
    let threshold = eps * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= threshold || scale == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.norm() <= eps * eps * scale {
                    continue;
                }
                let rot = Rotation::new(a[p * n + p].re, a[q * n + q].re, apq);
                rotate_columns(&mut a, n, p, q, &rot);
                rotate_rows(&mut a, n, p, q, &rot);
                a[p * n + q] = re(T::zero());
                a[q * n + p] = re(T::zero());
                a[p * n + p] = re(a[p * n + p].re);
                a[q * n + q] = re(a[q * n + q].re);
                rotate_columns(&mut v, n, p, q, &rot);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.partial_cmp(&a[j * n + j].re).expect("finite eigenvalues").then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let col: Vec<Complex<T>> = (0..n).map(|i| v[i * n + j]).collect();
            StateVector::normalized(col).expect("rotation columns are unit vectors")
        })
        .collect();
    Eigensystem { values, vectors }
}

/// Singular values in descending order (one-sided Jacobi).
pub fn singular_values<T: Real>(a: &Operator<T>) -> Vec<T> {
    let n = a.dim();
    let mut m = a.entries().to_vec();
    let eps = T::epsilon() * T::lit(n.max(1) as f64);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), re(T::zero()));
                for row in m.chunks(n) {
                    alpha += row[p].norm_sqr();
                    beta += row[q].norm_sqr();
                    gamma += row[p].conj() * row[q];
                }
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() == T::zero() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::new(alpha, beta, gamma);
                rotate_columns(&mut m, n, p, q, &rot);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<T> = (0..n).map(|j| (0..n).map(|i| m[i * n + j].norm_sqr()).sum::<T>().sqrt()).collect();
    sv.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    sv
}

/// Number of singular values above `tol · σ_max` (or `tol` when `A = 0`).
pub fn numerical_rank<T: Real>(a: &Operator<T>, tol: T) -> usize {
    let sv = singular_values(a);
    let largest = sv.first().copied().unwrap_or_else(T::zero);
    let reference = if largest > T::zero() { largest } else { T::one() };
    sv.iter().filter(|&&s| s > tol * reference).count()
}
