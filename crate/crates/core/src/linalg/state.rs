//! Normalized pure states.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, re, Real};

/// Tolerance on `|‖ψ‖ − 1|` accepted by [`StateVector::from_amplitudes`].
pub const NORM_TOL: f64 = 1e-10;

/// Unit-norm complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real = f64> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes that are already normalized within [`NORM_TOL`].
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = check_amplitudes(&amplitudes)?;
        let tol = T::lit(NORM_TOL).max(T::epsilon() * T::lit(64.0));
        if (norm - T::one()).abs() > tol {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = check_amplitudes(&amplitudes)?;
        if norm <= T::min_positive_value() {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
        let inv = T::one() / norm;
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z * inv).collect() })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::normalized(values.iter().map(|&x| re(T::lit(x))).collect())
    }

    /// Computational basis ket `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut amps = vec![re(T::zero()); dim];
        amps[index] = re(T::one());
        Ok(Self { amplitudes: amps })
    }

    /// Equal-weight superposition of all computational basis kets.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let a = T::one() / T::lit(dim as f64).sqrt();
        Ok(Self { amplitudes: vec![re(a); dim] })
    }

    pub fn computational_basis(dim: usize) -> Vec<Self> {
        (0..dim).map(|i| Self::basis(dim, i).expect("index in range")).collect()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { op: "inner", left: self.dim(), right: other.dim() });
        }
        Ok(inner_raw(&self.amplitudes, &other.amplitudes))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { amplitudes: kron_raw(&self.amplitudes, &other.amplitudes) }
    }

    /// Multiplies every amplitude by the same complex number of unit modulus.
    pub fn with_phase(&self, phase: Complex<T>) -> Self {
        Self { amplitudes: self.amplitudes.iter().map(|z| *z * phase).collect() }
    }

    pub fn cast<U: Real>(&self) -> StateVector<U> {
        StateVector {
            amplitudes: self
                .amplitudes
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

fn check_amplitudes<T: Real>(amplitudes: &[Complex<T>]) -> Result<T> {
    if amplitudes.is_empty() {
        return Err(Error::ZeroDimension);
    }
    if !amplitudes.iter().all(is_finite) {
        return Err(Error::NonFinite);
    }
    Ok(norm_raw(amplitudes))
}

/// `Σ conj(a_k) b_k`.
pub(crate) fn inner_raw<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(re(T::zero()), |acc, (x, y)| acc + x.conj() * *y)
}

pub(crate) fn norm_raw<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

pub(crate) fn kron_raw<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter().flat_map(|x| b.iter().map(move |y| *x * *y)).collect()
}

/// `‖G − I‖_F` for the Gram matrix of a vector family.
pub(crate) fn orthonormality_residual<T: Real>(vectors: &[&[Complex<T>]]) -> T {
    let mut acc = T::zero();
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let mut g = inner_raw(a, b);
            if i == j {
                g -= re(T::one());
            }
            acc += g.norm_sqr();
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_rules() {
        assert!(StateVector::<f64>::from_real(&[1.0, 1.0]).is_ok());
        let err = StateVector::<f64>::from_amplitudes(vec![re(0.9), re(0.0)]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
        assert!(StateVector::<f64>::normalized(vec![re(0.0); 3]).is_err());
        assert!(StateVector::<f64>::basis(2, 2).is_err());
    }

    #[test]
    fn tensor_is_system_major() {
        let a = StateVector::<f64>::basis(2, 1).unwrap();
        let b = StateVector::<f64>::basis(3, 2).unwrap();
        let ab = a.tensor(&b);
        assert_eq!(ab.dim(), 6);
        assert_eq!(ab.amplitudes()[5], re(1.0));
    }
}
