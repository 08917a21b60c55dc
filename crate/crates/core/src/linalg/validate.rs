use crate::error::{Error, Result};
use crate::scalar::Real;

use super::eigen::{hermitian_eigensystem, numerical_rank};
use super::operator::Operator;
use super::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Hermitian,
    Unitary,
    PositiveSpectrum,
    FullRank,
}

impl PropertyKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Hermitian => "hermitian",
            Self::Unitary => "unitary",
            Self::PositiveSpectrum => "positive_spectrum",
            Self::FullRank => "full_rank",
        }
    }
}

/// Outcome of [`validate`].
///
/// `residual` is `‖A − A†‖_F` (hermitian), `‖A†A − I‖_F` (unitary), the
/// smallest eigenvalue (positive_spectrum) or `dim − rank` (full_rank).
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T> {
    pub kind: PropertyKind,
    pub residual: T,
    pub rank: Option<usize>,
    pub verdict: bool,
}

pub fn validate<T: Real>(a: &Operator<T>, kind: PropertyKind, tol: &ToleranceConfig<T>) -> Result<ValidationReport<T>> {
    let report = match kind {
        PropertyKind::Hermitian => {
            let residual = a.hermiticity_residual();
            ValidationReport { kind, residual, rank: None, verdict: residual <= tol.hermiticity }
        }
        PropertyKind::Unitary => {
            let residual = a.unitarity_residual();
            ValidationReport { kind, residual, rank: None, verdict: residual <= tol.unitarity }
        }
        PropertyKind::PositiveSpectrum => {
            let es = hermitian_eigensystem(a, tol).map_err(|e| match e {
                Error::NotHermitian { residual } => Error::Precondition {
                    check: "hermitian",
                    detail: format!("positive_spectrum needs a Hermitian operator (residual {residual:e})"),
                },
                other => other,
            })?;
            let min = es.values[0];
            ValidationReport { kind, residual: min, rank: None, verdict: min > tol.rank }
        }
        PropertyKind::FullRank => {
            let rank = numerical_rank(a, tol.rank);
            ValidationReport {
                kind,
                residual: T::lit((a.dim() - rank) as f64),
                rank: Some(rank),
                verdict: rank == a.dim(),
            }
        }
    };
    Ok(report)
}
