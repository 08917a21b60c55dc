//! Unitary constructions: completion of orthonormal families, Haar sampling
//! and exponentials of anti-Hermitian generators.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::random::seeded_rng;
use crate::scalar::{c, re, Real};

use super::eigen::hermitian_eigensystem;
use super::operator::Operator;
use super::state::{inner_raw, norm_raw, orthonormality_residual, StateVector};
use super::tolerance::ToleranceConfig;

/// Input families must be orthonormal to this accuracy.
pub const ORTHONORMAL_INPUT_TOL: f64 = 1e-8;

/// Removes the components of `v` along each (unit) vector in `basis`, twice.
fn project_out<T: Real>(v: &mut [Complex<T>], basis: &[Vec<Complex<T>>]) {
    for _ in 0..2 {
        for b in basis {
            let overlap = inner_raw(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= *y * overlap;
            }
        }
    }
}

/// Extends orthonormal columns to a unitary of size `dim`.
///
/// The first `k` columns of the result are the inputs bit-for-bit; the rest
/// are Gram-Schmidt completions of the computational basis, choosing at each
/// step the candidate with the largest residual.
pub fn unitary_completion<T: Real>(columns: &[StateVector<T>], dim: usize) -> Result<Operator<T>> {
    let raw: Vec<Vec<Complex<T>>> = columns.iter().map(|s| s.amplitudes().to_vec()).collect();
    unitary_completion_raw(raw, dim)
}

pub(crate) fn unitary_completion_raw<T: Real>(columns: Vec<Vec<Complex<T>>>, dim: usize) -> Result<Operator<T>> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if columns.len() > dim {
        return Err(Error::TooManyColumns { count: columns.len(), dim });
    }
    if let Some(bad) = columns.iter().find(|col| col.len() != dim) {
        return Err(Error::DimensionMismatch { op: "unitary_completion", left: dim, right: bad.len() });
    }
    let refs: Vec<&[Complex<T>]> = columns.iter().map(|v| v.as_slice()).collect();
    let residual = orthonormality_residual(&refs);
    if residual > T::lit(ORTHONORMAL_INPUT_TOL) {
        return Err(Error::NotOrthonormal { residual: residual.as_f64() });
    }

    let mut basis = columns;
    while basis.len() < dim {
        let mut best: Option<(T, Vec<Complex<T>>)> = None;
        for e in 0..dim {
            let mut v = vec![re(T::zero()); dim];
            v[e] = re(T::one());
            project_out(&mut v, &basis);
            let n = norm_raw(&v);
            if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, v));
            }
        }
        let (n, v) = best.expect("dim > 0");
        let inv = T::one() / n;
        basis.push(v.into_iter().map(|z| z * inv).collect());
    }
    Operator::from_columns(&basis)
}

fn complex_gaussian<T: Real>(rng: &mut ChaCha8Rng) -> Complex<T> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    c(T::lit(x * scale), T::lit(y * scale))
}

/// Haar-distributed unitary drawn from `rng`.
///
/// A standard complex Gaussian matrix is orthonormalized column by column
/// (Gram-Schmidt with reorthogonalization). The implied triangular factor has
/// a positive real diagonal, which is the phase fix that makes the
/// distribution Haar.
pub fn haar_unitary_with<T: Real>(dim: usize, rng: &mut ChaCha8Rng) -> Operator<T> {
    assert!(dim > 0, "Haar unitary needs a positive dimension");
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex<T>> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        project_out(&mut v, &cols);
        let n = norm_raw(&v);
        // a Gaussian draw landing in the span has probability zero; redraw
        if n <= T::epsilon().sqrt() {
            continue;
        }
        let inv = T::one() / n;
        cols.push(v.into_iter().map(|z| z * inv).collect());
    }
    Operator::from_columns(&cols).expect("square by construction")
}

/// Haar-distributed unitary, bit-reproducible for a given `(dim, seed)`.
pub fn random_haar_unitary<T: Real>(dim: usize, seed: u64) -> Operator<T> {
    haar_unitary_with(dim, &mut seeded_rng(seed, 0))
}

/// Uniformly distributed pure state (first column of a Haar unitary).
pub fn haar_state_with<T: Real>(dim: usize, rng: &mut ChaCha8Rng) -> StateVector<T> {
    let v: Vec<Complex<T>> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    StateVector::normalized(v).expect("nonzero Gaussian vector")
}

/// `exp(k)` for anti-Hermitian `k`, computed spectrally as `V diag(e^{iλ}) V†`
/// with `k = iH`.
pub fn anti_hermitian_exp<T: Real>(k: &Operator<T>, tol: &ToleranceConfig<T>) -> Result<Operator<T>> {
    let residual = k.anti_hermiticity_residual();
    if residual > tol.hermiticity {
        return Err(Error::NotAntiHermitian { residual: residual.as_f64() });
    }
    // H = -i k
    let h = k.scale(c(T::zero(), -T::one()));
    let es = hermitian_eigensystem(&h, &ToleranceConfig::uniform(T::infinity()))?;
    Ok(es.reconstruct_with(|lambda| c(lambda.cos(), lambda.sin())))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Op = Operator<f64>;
    type Ket = StateVector<f64>;

    #[test]
    fn completion_of_single_vector() {
        let u = unitary_completion(&[Ket::basis(2, 0).unwrap()], 2).unwrap();
        assert!(u.unitarity_residual() < 1e-15);
        assert_eq!(u[(0, 0)], re(1.0));
        assert!(u[(0, 1)].norm() < 1e-15 && (u[(1, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn completion_keeps_inputs() {
        let cols = [Ket::basis(4, 0).unwrap(), Ket::basis(4, 1).unwrap()];
        let u = unitary_completion(&cols, 4).unwrap();
        assert_eq!(u.column(0), cols[0].amplitudes());
        assert_eq!(u.column(1), cols[1].amplitudes());
        assert!(u.unitarity_residual() < 1e-14);
    }

    #[test]
    fn completion_rejects_non_orthogonal() {
        let cols = [Ket::basis(2, 0).unwrap(), Ket::from_real(&[1.0, 1.0]).unwrap()];
        assert!(matches!(unitary_completion(&cols, 2), Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn completion_rejects_too_many() {
        let cols = vec![Ket::basis(1, 0).unwrap(); 2];
        assert!(matches!(unitary_completion(&cols, 1), Err(Error::TooManyColumns { .. })));
    }

    #[test]
    fn haar_is_deterministic_and_unitary() {
        let a: Op = random_haar_unitary(4, 42);
        let b: Op = random_haar_unitary(4, 42);
        assert_eq!(a, b);
        assert!(a.unitarity_residual() <= 1e-12);
        assert_ne!(a, random_haar_unitary(4, 43));
    }

    #[test]
    fn haar_dim_one_is_a_phase() {
        let u: Op = random_haar_unitary(1, 9);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exp_examples() {
        let tol = ToleranceConfig::default();
        assert!((&anti_hermitian_exp(&Op::zeros(3), &tol).unwrap() - &Op::identity(3)).frobenius_norm() < 1e-15);
        let k = Op::pauli_z().scale(c(0.0, std::f64::consts::FRAC_PI_2));
        let e = anti_hermitian_exp(&k, &tol).unwrap();
        let expected = Op::from_rows(vec![vec![c(0.0, 1.0), re(0.0)], vec![re(0.0), c(0.0, -1.0)]]).unwrap();
        assert!((&e - &expected).frobenius_norm() < 1e-15);
    }

    #[test]
    fn exp_rejects_hermitian_generator() {
        let r = anti_hermitian_exp(&Op::pauli_x(), &ToleranceConfig::default());
        assert!(matches!(r, Err(Error::NotAntiHermitian { .. })));
    }
}
