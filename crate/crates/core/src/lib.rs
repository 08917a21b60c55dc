//! Numerical toolkit for the Wigner–Araki–Yanase limitation on nondestructive
//! measurements, in its multiplicative-conservation form.
//!
//! Everything is generic over a [`Real`] scalar (`f32` or `f64`). The
//! `*64` aliases below fix the scalar to `f64`, which is what the default
//! tolerances are tuned for.

pub mod commutant;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod noise;
pub mod random;
pub mod scalar;
pub mod way;

pub use commutant::{conserved_eigenspaces, random_commutant_unitary, BlockDecomposition};
pub use commutant::{feasibility_search, minimize_epsilon, FeasibilityResult, SearchConfig, SearchResult};
pub use error::{Error, Result};
pub use linalg::{
    anti_hermitian_exp, commutator, expectation, hermitian_eigensystem, numerical_rank, random_haar_unitary,
    tensor_product, unitary_completion, validate, variance, Eigensystem, Operator, PropertyKind, StateVector,
    ToleranceConfig, ValidationReport,
};
pub use measurement::{
    check_conserved, check_exact, check_nondestructive, joint_blocks, synthesize_unitary, ConservationKind,
    ConservedQuantity, MeasurementModel, PointerFamily,
};
pub use noise::{
    bound_audit_sweep, epsilon_sq, noise_operator, noise_report, paper_bound, robertson_bound, simplified_bound,
    variance_audit_sweep, variance_identity_audit, yanase_bound, AuditConfig, AuditFlavor, AuditSummary, BoundAudit,
    BoundTally, BoundValue, NoiseReport, VarianceAudit, VarianceSweep,
};
pub use scalar::{Real, C};
pub use way::{
    counterexample_sweep, matrix_element_identity, pointer_gram_rank, theorem_verdict, CounterexampleSweep,
    GramRankReport, Outcome, TheoremVerdict,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Operator64 = Operator<f64>;
pub type StateVector64 = StateVector<f64>;
pub type Tolerances64 = ToleranceConfig<f64>;
pub type Model64 = MeasurementModel<f64>;
pub type Conserved64 = ConservedQuantity<f64>;
