//! Dense complex linear algebra with explicit tolerances.

mod eigen;
mod moments;
mod operator;
mod state;
mod tolerance;
mod unitary;
mod validate;

pub use eigen::{hermitian_eigensystem, numerical_rank, singular_values, Eigensystem};
pub use moments::{expectation, variance};
pub use operator::{commutator, tensor_product, Operator};
pub use state::{StateVector, NORM_TOL};
pub use tolerance::ToleranceConfig;
pub use unitary::{
    anti_hermitian_exp, haar_state_with, haar_unitary_with, random_haar_unitary, unitary_completion,
    ORTHONORMAL_INPUT_TOL,
};
pub use validate::{validate, PropertyKind, ValidationReport};

pub(crate) use moments::centered_spread;
pub(crate) use state::{inner_raw, kron_raw, norm_raw, orthonormality_residual};
pub(crate) use unitary::unitary_completion_raw;
