//! Expectation values and variances in pure states.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::operator::Operator;
use super::state::{inner_raw, norm_raw, StateVector};
use super::tolerance::ToleranceConfig;

/// `⟨s|a|s⟩`.
pub fn expectation<T: Real>(a: &Operator<T>, s: &StateVector<T>) -> Result<Complex<T>> {
    let applied = a.apply(s)?;
    Ok(inner_raw(s.amplitudes(), &applied))
}

/// `⟨a²⟩ − ⟨a⟩²` for Hermitian `a`.
///
/// Evaluated as `‖(a − ⟨a⟩)s‖²`, which is nonnegative by construction and
/// agrees with the moment difference to rounding.
pub fn variance<T: Real>(a: &Operator<T>, s: &StateVector<T>, tol: &ToleranceConfig<T>) -> Result<T> {
    let residual = a.hermiticity_residual();
    if residual > tol.hermiticity {
        return Err(Error::NotHermitian { residual: residual.as_f64() });
    }
    centered_spread(a, s.amplitudes())
}

/// `‖(a − ⟨a⟩)ψ‖²` for an arbitrary (assumed normalized) amplitude vector;
/// skips the hermiticity check.
pub(crate) fn centered_spread<T: Real>(a: &Operator<T>, psi: &[Complex<T>]) -> Result<T> {
    if a.dim() != psi.len() {
        return Err(Error::DimensionMismatch { op: "variance", left: a.dim(), right: psi.len() });
    }
    let applied = a.apply_raw(psi);
    let mean = inner_raw(psi, &applied).re;
    let centered: Vec<Complex<T>> = applied.iter().zip(psi).map(|(x, y)| *x - *y * mean).collect();
    let v = norm_raw(&centered);
    Ok(v * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator::tensor_product;
    use crate::scalar::re;

    type Op = Operator<f64>;
    type Ket = StateVector<f64>;

    #[test]
    fn expectation_examples() {
        let z = Op::pauli_z();
        assert_eq!(expectation(&z, &Ket::basis(2, 0).unwrap()).unwrap(), re(1.0));
        assert!(expectation(&z, &Ket::uniform(2).unwrap()).unwrap().norm() < 1e-15);
        let d = Op::from_diagonal(&[1.0, 2.0]);
        assert!((expectation(&d, &Ket::uniform(2).unwrap()).unwrap() - re(1.5)).norm() < 1e-15);
    }

    #[test]
    fn variance_examples() {
        let tol = ToleranceConfig::default();
        let z = Op::pauli_z();
        let zero = Ket::basis(2, 0).unwrap();
        let plus = Ket::uniform(2).unwrap();
        assert_eq!(variance(&z, &zero, &tol).unwrap(), 0.0);
        assert!((variance(&z, &plus, &tol).unwrap() - 1.0).abs() < 1e-15);
        // direct four-dimensional evaluation: ⟨(Z⊗Z)²⟩ − ⟨Z⊗Z⟩² = 1 − 0
        let zz = tensor_product(&z, &z);
        assert!((variance(&zz, &plus.tensor(&zero), &tol).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn variance_rejects_non_hermitian() {
        let a = Op::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let r = variance(&a, &Ket::uniform(2).unwrap(), &ToleranceConfig::default());
        assert!(matches!(r, Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let r = expectation(&Op::identity(3), &Ket::uniform(2).unwrap());
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }
}
