//! Measurement noise and its lower bounds for multiplicative conserved
//! quantities.
//!
//! The noise operator is `N = Û†(1⊗M)Û − O⊗1` for a probe observable `M` on
//! the apparatus and target `O` on the system, and `ε(ψ)² = ⟨ψ⊗v|N²|ψ⊗v⟩`.
//! With `L = L^A⊗L^B` conserved, the Robertson relation gives the rigorous
//! chain `ε² ≥ (ΔN)² ≥ |⟨[N, L]⟩|² / (4·Var(L))`.
//!
//! The other bounds replace `Var(L)` by `(ΔL^A)²(ΔL^B)²` (with `ΔL^A` taken
//! on `ψ` and `ΔL^B` on `v`). That substitution is not an identity on
//! product states (see [`variance_identity_audit`]), so those bounds are
//! evaluated and audited against `ε²`, never assumed.
//!
//! The numerator term `L^A⊗[M, L^B]` is read as `Û†(L^A⊗[M, L^B])Û`, which
//! makes it equal to `⟨[N, L]⟩` when `L` is conserved.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commutant::{commutant_unitary_with, conserved_eigenspaces};
use crate::error::{Error, Result};
use crate::linalg::{
    centered_spread, commutator, haar_state_with, hermitian_eigensystem, inner_raw, tensor_product, Operator,
    StateVector, ToleranceConfig,
};
use crate::measurement::{check_conserved, ConservationKind, ConservedQuantity, MeasurementModel};
use crate::random::{random_hermitian, random_positive_operator, random_with_spectrum, seeded_rng};
use crate::scalar::Real;

/// Slack allowed when comparing a bound with `ε²`.
pub const VALIDITY_SLACK: f64 = 1e-9;
/// Variances at or below this make a denominator degenerate.
pub const DEGENERATE_VARIANCE: f64 = 1e-12;
/// `‖[M, L^B]‖_F` at or below which the Yanase condition is taken to hold.
pub const YANASE_TOL: f64 = 1e-10;
/// `|⟨v|L^B|v⟩|` at or below which the simplified bound applies.
pub const ZERO_MEAN_TOL: f64 = 1e-10;
/// Agreement required by the product-variance audit.
pub const VARIANCE_AUDIT_TOL: f64 = 1e-10;

fn hermitian_of_dim<T: Real>(op: &Operator<T>, dim: usize, what: &'static str) -> Result<()> {
    if op.dim() != dim {
        return Err(Error::DimensionMismatch { op: what, left: dim, right: op.dim() });
    }
    let residual = op.hermiticity_residual();
    if residual > ToleranceConfig::<T>::default().hermiticity {
        return Err(Error::NotHermitian { residual: residual.as_f64() });
    }
    Ok(())
}

/// `N = Û†(1⊗probe)Û − o⊗1`.
pub fn noise_operator<T: Real>(m: &MeasurementModel<T>, o: &Operator<T>, probe: &Operator<T>) -> Result<Operator<T>> {
    hermitian_of_dim(o, m.n1(), "observable")?;
    hermitian_of_dim(probe, m.n2(), "probe")?;
    let evolved = tensor_product(&Operator::identity(m.n1()), probe).conjugate_by(m.interaction())?;
    Ok(&evolved - &tensor_product(o, &Operator::identity(m.n2())))
}

fn joint<T: Real>(m: &MeasurementModel<T>, psi: &StateVector<T>) -> Result<StateVector<T>> {
    m.joint_state(psi)
}

/// `⟨Ψ|a|Ψ⟩` for a joint state.
fn mean<T: Real>(a: &Operator<T>, psi: &StateVector<T>) -> Complex<T> {
    inner_raw(psi.amplitudes(), &a.apply_raw(psi.amplitudes()))
}

/// `ε(ψ)² = ⟨ψ⊗v|N²|ψ⊗v⟩ = ‖N(ψ⊗v)‖²`.
pub fn epsilon_sq<T: Real>(
    m: &MeasurementModel<T>,
    o: &Operator<T>,
    probe: &Operator<T>,
    psi: &StateVector<T>,
) -> Result<T> {
    let n = noise_operator(m, o, probe)?;
    let big = joint(m, psi)?;
    let applied = n.apply_raw(big.amplitudes());
    Ok(applied.iter().map(|z| z.norm_sqr()).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobertsonReport<T> {
    /// `|⟨Ψ|[N, L]|Ψ⟩|² / 4`
    pub numerator: T,
    /// `Var_Ψ(L^A⊗L^B)`
    pub var_l_exact: T,
    /// `numerator / var_l_exact`, or 0 when the variance is degenerate.
    pub bound: T,
    pub degenerate: bool,
}

fn require_conserving<T: Real>(m: &MeasurementModel<T>, q: &ConservedQuantity<T>) -> Result<()> {
    if q.kind != ConservationKind::Multiplicative {
        return Err(Error::Precondition { check: "multiplicative", detail: "noise bounds need L^A⊗L^B".into() });
    }
    let tol = ToleranceConfig::<T>::default().conservation;
    let report = check_conserved(m, q, tol)?;
    if !report.verdict {
        return Err(Error::Precondition {
            check: "check_conserved",
            detail: format!("residual {:e} exceeds {:e}", report.residual.as_f64(), tol.as_f64()),
        });
    }
    Ok(())
}

/// Rigorous bound `|⟨[N, L]⟩|² / (4·Var(L))` with `L = L^A⊗L^B`.
///
/// A zero-variance `L` makes `Ψ` an eigenvector of `L`, which forces
/// `⟨[N, L]⟩ = 0`; that case reports a bound of 0 and sets `degenerate`.
pub fn robertson_bound<T: Real>(
    m: &MeasurementModel<T>,
    o: &Operator<T>,
    probe: &Operator<T>,
    q: &ConservedQuantity<T>,
    psi: &StateVector<T>,
) -> Result<RobertsonReport<T>> {
    require_conserving(m, q)?;
    let n = noise_operator(m, o, probe)?;
    let l = q.joint_operator();
    let big = joint(m, psi)?;
    let numerator = mean(&commutator(&n, &l)?, &big).norm_sqr() / T::lit(4.0);
    let var_l_exact = centered_spread(&l, big.amplitudes())?;
    let degenerate = var_l_exact <= T::lit(DEGENERATE_VARIANCE);
    let bound = if degenerate { T::zero() } else { numerator / var_l_exact };
    Ok(RobertsonReport { numerator, var_l_exact, bound, degenerate })
}

/// A bound that may be undefined (zero denominator) or not applicable (its
/// side condition fails).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue<T> {
    Value(T),
    Undefined,
    NotApplicable,
}

impl<T: Real> BoundValue<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Self::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_applicable(self) -> bool {
        !matches!(self, Self::NotApplicable)
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Self::Value(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport<T> {
    pub bound: BoundValue<T>,
    pub numerator: T,
    pub denominator: T,
    /// `bound ≤ ε² + slack`; `None` when no value was produced.
    pub valid: Option<bool>,
}

fn ratio<T: Real>(numerator: T, denominator: T, eps_sq: T) -> BoundReport<T> {
    let bound = if denominator <= T::lit(DEGENERATE_VARIANCE) {
        BoundValue::Undefined
    } else {
        BoundValue::Value(numerator / denominator)
    };
    let valid = bound.value().map(|b| b <= eps_sq + T::lit(VALIDITY_SLACK));
    BoundReport { bound, numerator, denominator, valid }
}

fn not_applicable<T: Real>() -> BoundReport<T> {
    BoundReport { bound: BoundValue::NotApplicable, numerator: T::zero(), denominator: T::zero(), valid: None }
}

/// Shared quantities for the product-variance bounds.
struct Factors<T: Real> {
    eps_sq: T,
    var_la: T,
    var_lb: T,
    big: StateVector<T>,
    o_la: Operator<T>,
}

fn factors<T: Real>(
    m: &MeasurementModel<T>,
    o: &Operator<T>,
    probe: &Operator<T>,
    q: &ConservedQuantity<T>,
    psi: &StateVector<T>,
) -> Result<Factors<T>> {
    Ok(Factors {
        eps_sq: epsilon_sq(m, o, probe, psi)?,
        var_la: centered_spread(&q.la, psi.amplitudes())?,
        var_lb: centered_spread(&q.lb, m.ready_state().amplitudes())?,
        big: joint(m, psi)?,
        o_la: commutator(o, &q.la)?,
    })
}

/// `|⟨[O, L^A]⊗L^B − Û†(L^A⊗[M, L^B])Û⟩|² / (4(ΔL^A)²(ΔL^B)²)`.
pub fn paper_bound<T: Real>(
    m: &MeasurementModel<T>,
    o: &Operator<T>,
    probe: &Operator<T>,
    q: &ConservedQuantity<T>,
    psi: &StateVector<T>,
) -> Result<BoundReport<T>> {
    require_conserving(m, q)?;
    let f = factors(m, o, probe, q, psi)?;
    let first = tensor_product(&f.o_la, &q.lb);
    let second = tensor_product(&q.la, &commutator(probe, &q.lb)?).conjugate_by(m.interaction())?;
    let numerator = mean(&(&first - &second), &f.big).norm_sqr();
    Ok(ratio(numerator, T::lit(4.0) * f.var_la * f.var_lb, f.eps_sq))
}

/// Form of [`paper_bound`] under the Yanase condition `[M, L^B] = 0`.
pub fn yanase_bound<T: Real>(
    m: &MeasurementModel<T>,
    o: &Operator<T>,
    probe: &Operator<T>,
    q: &ConservedQuantity<T>,
    psi: &StateVector<T>,
) -> Result<BoundReport<T>> {
    require_conserving(m, q)?;
    if commutator(probe, &q.lb)?.frobenius_norm() > T::lit(YANASE_TOL) {
        return Ok(not_applicable());
    }
    let f = factors(m, o, probe, q, psi)?;
    let numerator = mean(&tensor_product(&f.o_la, &q.lb), &f.big).norm_sqr();
    Ok(ratio(numerator, T::lit(4.0) * f.var_la * f.var_lb, f.eps_sq))
}

/// `|⟨ψ|[O, L^A]|ψ⟩|² / (4(ΔL^A)²)`, applicable when `⟨v|L^B|v⟩ = 0`.
///
/// On a product state with `⟨L^B⟩ = 0` the Yanase numerator vanishes, so
/// this form does not follow from it; it is computed and audited as stated.
pub fn simplified_bound<T: Real>(
    m: &MeasurementModel<T>,
    o: &Operator<T>,
    probe: &Operator<T>,
    q: &ConservedQuantity<T>,
    psi: &StateVector<T>,
) -> Result<BoundReport<T>> {
    require_conserving(m, q)?;
    let v = m.ready_state().amplitudes();
    if inner_raw(v, &q.lb.apply_raw(v)).norm() > T::lit(ZERO_MEAN_TOL) {
        return Ok(not_applicable());
    }
    let f = factors(m, o, probe, q, psi)?;
    let numerator = inner_raw(psi.amplitudes(), &f.o_la.apply_raw(psi.amplitudes())).norm_sqr();
    Ok(ratio(numerator, T::lit(4.0) * f.var_la, f.eps_sq))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseReport<T: Real = f64> {
    pub epsilon_sq: T,
    pub robertson: RobertsonReport<T>,
    pub paper: BoundReport<T>,
    pub yanase: BoundReport<T>,
    pub simplified: BoundReport<T>,
    /// `Var(L^A⊗L^B)` on `ψ⊗v`.
    pub var_l_exact: T,
    /// `Var_ψ(L^A)·Var_v(L^B)`.
    pub var_product_claim: T,
    pub robertson_valid: bool,
}

/// Every bound for one instance, compared against `ε²`.
pub fn noise_report<T: Real>(
    m: &MeasurementModel<T>,
    o: &Operator<T>,
    probe: &Operator<T>,
    q: &ConservedQuantity<T>,
    psi: &StateVector<T>,
) -> Result<NoiseReport<T>> {
    let robertson = robertson_bound(m, o, probe, q, psi)?;
    let eps = epsilon_sq(m, o, probe, psi)?;
    let var_la = centered_spread(&q.la, psi.amplitudes())?;
    let var_lb = centered_spread(&q.lb, m.ready_state().amplitudes())?;
    Ok(NoiseReport {
        epsilon_sq: eps,
        paper: paper_bound(m, o, probe, q, psi)?,
        yanase: yanase_bound(m, o, probe, q, psi)?,
        simplified: simplified_bound(m, o, probe, q, psi)?,
        var_l_exact: robertson.var_l_exact,
        var_product_claim: var_la * var_lb,
        robertson_valid: robertson.bound <= eps + T::lit(VALIDITY_SLACK),
        robertson,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceAudit<T> {
    /// `Var(A⊗B)` on `ψ_a⊗ψ_b`.
    pub lhs: T,
    /// `Var(A)·Var(B)`.
    pub paper_rhs: T,
    /// `Var(A)·Var(B) + Var(A)·⟨B⟩² + ⟨A⟩²·Var(B)`.
    pub corrected_rhs: T,
    pub paper_claim_holds: bool,
    pub corrected_holds: bool,
}

/// Compares the product-state variance of `A⊗B` with the bare product of
/// variances and with the exact expansion.
pub fn variance_identity_audit<T: Real>(
    a: &Operator<T>,
    b: &Operator<T>,
    psi_a: &StateVector<T>,
    psi_b: &StateVector<T>,
) -> Result<VarianceAudit<T>> {
    hermitian_of_dim(a, psi_a.dim(), "a")?;
    hermitian_of_dim(b, psi_b.dim(), "b")?;
    let joint_state = psi_a.tensor(psi_b);
    let lhs = centered_spread(&tensor_product(a, b), joint_state.amplitudes())?;
    let (var_a, var_b) = (centered_spread(a, psi_a.amplitudes())?, centered_spread(b, psi_b.amplitudes())?);
    let (mean_a, mean_b) = (mean(a, psi_a).re, mean(b, psi_b).re);
    let paper_rhs = var_a * var_b;
    let corrected_rhs = paper_rhs + var_a * mean_b * mean_b + mean_a * mean_a * var_b;
    let tol = T::lit(VARIANCE_AUDIT_TOL);
    Ok(VarianceAudit {
        lhs,
        paper_rhs,
        corrected_rhs,
        paper_claim_holds: (lhs - paper_rhs).abs() <= tol,
        corrected_holds: (lhs - corrected_rhs).abs() <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceSweep<T> {
    pub trials: usize,
    /// Trials where `lhs ≠ corrected_rhs` beyond the audit tolerance.
    pub corrected_failures: usize,
    /// Trials where `lhs ≠ Var(A)·Var(B)` beyond the audit tolerance.
    pub paper_failures: usize,
    pub max_corrected_gap: T,
    pub max_paper_gap: T,
}

/// [`variance_identity_audit`] on random Hermitian `A`, `B` and Haar-random
/// factor states, one RNG stream per trial.
pub fn variance_audit_sweep<T: Real>(n1: usize, n2: usize, count: usize, seed: u64) -> Result<VarianceSweep<T>> {
    if count == 0 || n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument("variance audit needs count, n1, n2 >= 1".into()));
    }
    let audits: Vec<VarianceAudit<T>> = (0..count)
        .into_par_iter()
        .map(|trial| {
            let mut rng = seeded_rng(seed, trial as u64);
            let a = random_hermitian(n1, &mut rng);
            let b = random_hermitian(n2, &mut rng);
            let psi_a = haar_state_with(n1, &mut rng);
            let psi_b = haar_state_with(n2, &mut rng);
            variance_identity_audit(&a, &b, &psi_a, &psi_b)
        })
        .collect::<Result<_>>()?;
    let mut out = VarianceSweep {
        trials: count,
        corrected_failures: 0,
        paper_failures: 0,
        max_corrected_gap: T::zero(),
        max_paper_gap: T::zero(),
    };
    for a in &audits {
        out.corrected_failures += usize::from(!a.corrected_holds);
        out.paper_failures += usize::from(!a.paper_claim_holds);
        out.max_corrected_gap = out.max_corrected_gap.max((a.lhs - a.corrected_rhs).abs());
        out.max_paper_gap = out.max_paper_gap.max((a.lhs - a.paper_rhs).abs());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    pub n1: usize,
    pub n2: usize,
    pub count: usize,
    pub seed: u64,
}

/// Which side condition a bound-audit trial was built to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditFlavor {
    /// Positive `L^B`, unrelated Hermitian probe.
    Generic,
    /// Probe diagonal in the `L^B` eigenbasis (Yanase condition holds).
    Yanase,
    /// Indefinite `L^B` with `⟨v|L^B|v⟩ = 0` and a Yanase probe.
    ZeroMean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord<T: Real = f64> {
    pub trial: usize,
    pub flavor: AuditFlavor,
    pub epsilon_sq: T,
    pub robertson_bound: T,
    pub robertson_degenerate: bool,
    pub paper: BoundValue<T>,
    pub yanase: BoundValue<T>,
    pub simplified: BoundValue<T>,
    pub robertson_valid: bool,
    pub paper_valid: Option<bool>,
    pub yanase_valid: Option<bool>,
    pub simplified_valid: Option<bool>,
}

/// Per-bound tallies. `evaluated` counts trials that produced a value;
/// `degenerate` counts applicable trials whose denominator vanished.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundTally {
    pub applicable: usize,
    pub evaluated: usize,
    pub degenerate: usize,
    pub violations: usize,
}

impl BoundTally {
    fn add(&mut self, value: BoundValueKind, valid: Option<bool>) {
        match value {
            BoundValueKind::NotApplicable => {}
            BoundValueKind::Undefined => {
                self.applicable += 1;
                self.degenerate += 1;
            }
            BoundValueKind::Value => {
                self.applicable += 1;
                self.evaluated += 1;
            }
        }
        if valid == Some(false) {
            self.violations += 1;
        }
    }

    /// Violations over evaluated trials (0 when nothing was evaluated).
    pub fn violation_fraction(&self) -> f64 {
        if self.evaluated == 0 {
            0.0
        } else {
            self.violations as f64 / self.evaluated as f64
        }
    }
}

#[derive(Clone, Copy)]
enum BoundValueKind {
    Value,
    Undefined,
    NotApplicable,
}

impl<T> From<BoundValue<T>> for BoundValueKind {
    fn from(b: BoundValue<T>) -> Self {
        match b {
            BoundValue::Value(_) => Self::Value,
            BoundValue::Undefined => Self::Undefined,
            BoundValue::NotApplicable => Self::NotApplicable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AuditSummary {
    pub trials: usize,
    pub robertson: BoundTally,
    pub paper: BoundTally,
    pub yanase: BoundTally,
    pub simplified: BoundTally,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundAudit<T: Real = f64> {
    pub config: AuditConfig,
    pub records: Vec<AuditRecord<T>>,
    pub summary: AuditSummary,
}

struct Instance<T: Real> {
    m: MeasurementModel<T>,
    q: ConservedQuantity<T>,
    o: Operator<T>,
    probe: Operator<T>,
    psi: StateVector<T>,
}

/// Random conforming instance: positive `L^A`, a conserving Haar-random
/// commutant interaction, Gaussian Hermitian target, random `ψ` and `v`.
/// The flavor cycles with the trial index so every bound gets exercised.
fn audit_instance<T: Real>(n1: usize, n2: usize, flavor: AuditFlavor, rng: &mut ChaCha8Rng) -> Result<Instance<T>> {
    let cfg = ToleranceConfig::default();
    let la: Operator<T> = random_positive_operator(n1, rng);
    let (lb, probe, ready) = match flavor {
        AuditFlavor::Generic => {
            let lb = random_positive_operator(n2, rng);
            let probe = random_hermitian(n2, rng);
            (lb, probe, haar_state_with(n2, rng))
        }
        AuditFlavor::Yanase => {
            let lb = random_positive_operator(n2, rng);
            let probe = function_of(&lb, rng)?;
            (lb, probe, haar_state_with(n2, rng))
        }
        AuditFlavor::ZeroMean => zero_mean_apparatus(n2, rng)?,
    };
    let q = ConservedQuantity::new(ConservationKind::Multiplicative, la, lb, &cfg)?;
    let d = conserved_eigenspaces(&q, &cfg)?;
    let u = commutant_unitary_with(&d, rng);
    let m = MeasurementModel::new(StateVector::computational_basis(n1), ready, u, &cfg)?;
    let o = random_hermitian(n1, rng);
    let psi = haar_state_with(n1, rng);
    Ok(Instance { m, q, o, probe, psi })
}

/// Random real function of a Hermitian operator (commutes with it).
fn function_of<T: Real>(a: &Operator<T>, rng: &mut ChaCha8Rng) -> Result<Operator<T>> {
    let es = hermitian_eigensystem(a, &ToleranceConfig::default())?;
    let values: Vec<T> = es.values.iter().map(|_| T::lit(rng.random_range(-1.0..1.0))).collect();
    let mut out = Operator::zeros(a.dim());
    for (v, lambda) in es.vectors.iter().zip(values) {
        out = &out + &Operator::outer(v, v)?.scale_real(lambda);
    }
    Ok(out)
}

/// Indefinite `L^B` with spectrum split between [0.5, 2] and [−2, −0.5],
/// and a ready state on one positive and one negative eigenvector weighted
/// so that `⟨v|L^B|v⟩ = 0`.
fn zero_mean_apparatus<T: Real>(n2: usize, rng: &mut ChaCha8Rng) -> Result<(Operator<T>, Operator<T>, StateVector<T>)> {
    if n2 < 2 {
        return Err(Error::InvalidArgument("a zero-mean apparatus needs n2 >= 2".into()));
    }
    let spectrum: Vec<f64> = (0..n2)
        .map(|k| {
            let mag = rng.random_range(0.5..2.0);
            if k % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let lb: Operator<T> = random_with_spectrum(&spectrum, rng);
    let es = hermitian_eigensystem(&lb, &ToleranceConfig::default())?;
    let (neg, pos) = (0, n2 - 1);
    let (dn, dp) = (es.values[neg], es.values[pos]);
    // p·dp + (1 − p)·dn = 0
    let p = -dn / (dp - dn);
    let phase: Operator<T> = crate::linalg::haar_unitary_with(1, rng);
    let amps: Vec<Complex<T>> = es.vectors[pos]
        .amplitudes()
        .iter()
        .zip(es.vectors[neg].amplitudes())
        .map(|(a, b)| *a * p.sqrt() + *b * phase[(0, 0)] * (T::one() - p).sqrt())
        .collect();
    let ready = StateVector::normalized(amps)?;
    let probe = function_of(&lb, rng)?;
    Ok((lb, probe, ready))
}

/// Evaluates every bound on `count` seeded random conforming instances.
pub fn bound_audit_sweep<T: Real>(config: AuditConfig) -> Result<BoundAudit<T>> {
    let AuditConfig { n1, n2, count, seed } = config;
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    if n1 == 0 || n2 < 2 {
        return Err(Error::InvalidArgument("the bound audit needs n1 >= 1 and n2 >= 2".into()));
    }
    let records: Vec<AuditRecord<T>> = (0..count)
        .into_par_iter()
        .map(|trial| {
            let mut rng = seeded_rng(seed, trial as u64);
            let flavor = match trial % 3 {
                0 => AuditFlavor::Generic,
                1 => AuditFlavor::Yanase,
                _ => AuditFlavor::ZeroMean,
            };
            let x = audit_instance(n1, n2, flavor, &mut rng)?;
            let r = noise_report(&x.m, &x.o, &x.probe, &x.q, &x.psi)?;
            Ok(AuditRecord {
                trial,
                flavor,
                epsilon_sq: r.epsilon_sq,
                robertson_bound: r.robertson.bound,
                robertson_degenerate: r.robertson.degenerate,
                paper: r.paper.bound,
                yanase: r.yanase.bound,
                simplified: r.simplified.bound,
                robertson_valid: r.robertson_valid,
                paper_valid: r.paper.valid,
                yanase_valid: r.yanase.valid,
                simplified_valid: r.simplified.valid,
            })
        })
        .collect::<Result<_>>()?;

    let mut summary = AuditSummary { trials: count, ..AuditSummary::default() };
    for r in &records {
        let rob = if r.robertson_degenerate { BoundValueKind::Undefined } else { BoundValueKind::Value };
        summary.robertson.add(rob, Some(r.robertson_valid));
        summary.paper.add(r.paper.into(), r.paper_valid);
        summary.yanase.add(r.yanase.into(), r.yanase_valid);
        summary.simplified.add(r.simplified.into(), r.simplified_valid);
    }
    Ok(BoundAudit { config, records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, re};

    type Op = Operator<f64>;
    type Ket = StateVector<f64>;

    fn q(la: Op, lb: Op) -> ConservedQuantity<f64> {
        ConservedQuantity::multiplicative(la, lb).unwrap()
    }

    fn plus() -> Ket {
        Ket::uniform(2).unwrap()
    }

    #[test]
    fn noise_operator_examples() {
        let m = MeasurementModel::cnot();
        let z = Op::pauli_z();
        let i2 = Op::identity(2);
        let n = noise_operator(&m, &z, &z).unwrap();
        let expected = &tensor_product(&z, &z) - &tensor_product(&z, &i2);
        assert!((&n - &expected).frobenius_norm() < 1e-15);

        let n = noise_operator(&m, &z, &i2).unwrap();
        let expected = &Op::identity(4) - &tensor_product(&z, &i2);
        assert!((&n - &expected).frobenius_norm() < 1e-15);

        assert_eq!(noise_operator(&m, &Op::zeros(2), &Op::zeros(2)).unwrap(), Op::zeros(4));
    }

    #[test]
    fn noise_operator_rejects_bad_inputs() {
        let m = MeasurementModel::cnot();
        assert!(matches!(noise_operator(&m, &Op::identity(3), &Op::identity(2)), Err(Error::DimensionMismatch { .. })));
        let skew = Op::pauli_y().scale(c(0.0, 1.0));
        assert!(matches!(noise_operator(&m, &skew, &Op::identity(2)), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn epsilon_examples() {
        let m = MeasurementModel::cnot();
        let z = Op::pauli_z();
        assert!(epsilon_sq(&m, &z, &z, &plus()).unwrap().abs() < 1e-15);
        // ⟨+|(1 − Z)²|+⟩ = ⟨+|2 − 2Z|+⟩ = 2
        assert!((epsilon_sq(&m, &z, &Op::identity(2), &plus()).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(epsilon_sq(&m, &Op::zeros(2), &Op::zeros(2), &plus()).unwrap(), 0.0);
    }

    #[test]
    fn robertson_examples() {
        let m = MeasurementModel::cnot();
        let z = Op::pauli_z();
        let qq = q(Op::from_diagonal(&[1.0, 2.0]), Op::identity(2));
        let r = robertson_bound(&m, &z, &z, &qq, &plus()).unwrap();
        assert!(r.numerator.abs() < 1e-15);
        assert!((r.var_l_exact - 0.25).abs() < 1e-15);
        assert_eq!(r.bound, 0.0);

        let r = robertson_bound(&m, &z, &z, &qq, &Ket::basis(2, 1).unwrap()).unwrap();
        assert!(r.degenerate && r.bound == 0.0);

        let d = Op::from_diagonal(&[1.0, 2.0]);
        let err = robertson_bound(&m, &z, &z, &q(d.clone(), d), &plus()).unwrap_err();
        assert!(matches!(err, Error::Precondition { check: "check_conserved", .. }));
    }

    #[test]
    fn paper_bound_examples() {
        let m = MeasurementModel::cnot();
        let z = Op::pauli_z();
        let qq = q(Op::from_diagonal(&[1.0, 2.0]), Op::identity(2));
        let r = paper_bound(&m, &z, &z, &qq, &plus()).unwrap();
        assert!(r.numerator.abs() < 1e-15);
        assert_eq!(r.bound, BoundValue::Undefined);
        assert_eq!(r.valid, None);

        // identity interaction conserves anything; o commutes with la
        let m = MeasurementModel::computational(2, plus(), Op::identity(4)).unwrap();
        let la = Op::from_diagonal(&[1.0, 2.0]);
        let r = paper_bound(&m, &la, &z, &q(la.clone(), la.clone()), &plus()).unwrap();
        assert_eq!(r.bound, BoundValue::Value(0.0));
        assert_eq!(r.valid, Some(true));
    }

    #[test]
    fn yanase_examples() {
        let m = MeasurementModel::cnot();
        let z = Op::pauli_z();
        let la = Op::from_diagonal(&[1.0, 2.0]);
        let r = yanase_bound(&m, &la, &z, &q(la.clone(), Op::identity(2)), &plus()).unwrap();
        assert!(r.bound.is_applicable());
        assert!(r.numerator.abs() < 1e-15);

        let id = MeasurementModel::computational(2, plus(), Op::identity(4)).unwrap();
        let r = yanase_bound(&id, &la, &Op::pauli_x(), &q(Op::identity(2), z), &plus()).unwrap();
        assert_eq!(r.bound, BoundValue::NotApplicable);
    }

    #[test]
    fn simplified_examples() {
        let m = MeasurementModel::cnot();
        let la = Op::from_diagonal(&[1.0, 2.0]);
        let r = simplified_bound(&m, &la, &Op::pauli_z(), &q(la.clone(), Op::identity(2)), &plus()).unwrap();
        assert_eq!(r.bound, BoundValue::NotApplicable);

        let id = MeasurementModel::computational(2, plus(), Op::identity(4)).unwrap();
        let qz = q(la.clone(), Op::pauli_z());
        let r = simplified_bound(&id, &la, &Op::pauli_z(), &qz, &plus()).unwrap();
        assert_eq!(r.bound, BoundValue::Value(0.0));
        assert_eq!(r.valid, Some(true));

        // [X, diag(1,2)] = [[0,1],[-1,0]]; on (|0⟩+i|1⟩)/√2 its mean is i, so |⟨·⟩| = 1;
        // Var(la) = 1/4 there, giving 1/(4·1/4) = 1
        let psi = Ket::normalized(vec![re(1.0), c(0.0, 1.0)]).unwrap();
        let r = simplified_bound(&id, &Op::pauli_x(), &Op::pauli_z(), &qz, &psi).unwrap();
        assert!((r.numerator - 1.0).abs() < 1e-14);
        assert!((r.bound.value().unwrap() - 1.0).abs() < 1e-14);
        let eps = epsilon_sq(&id, &Op::pauli_x(), &Op::pauli_z(), &psi).unwrap();
        assert_eq!(r.valid, Some(1.0 <= eps + 1e-9));
    }

    #[test]
    fn variance_audit_examples() {
        let z = Op::pauli_z();
        let a = variance_identity_audit(&z, &z, &plus(), &Ket::basis(2, 0).unwrap()).unwrap();
        assert!((a.lhs - 1.0).abs() < 1e-15 && a.paper_rhs.abs() < 1e-15 && (a.corrected_rhs - 1.0).abs() < 1e-15);
        assert!(!a.paper_claim_holds && a.corrected_holds);

        let y_plus = Ket::normalized(vec![re(1.0), c(0.0, 1.0)]).unwrap();
        let a = variance_identity_audit(&z, &Op::pauli_x(), &plus(), &y_plus).unwrap();
        assert!((a.lhs - a.paper_rhs).abs() < 1e-14 && (a.lhs - a.corrected_rhs).abs() < 1e-14);
        assert!(a.paper_claim_holds);

        // Var(1⊗B) = Var(B): zero only on an eigenstate of B
        let a = variance_identity_audit(&Op::identity(2), &z, &plus(), &Ket::basis(2, 0).unwrap()).unwrap();
        assert!(a.lhs.abs() < 1e-15 && a.paper_rhs.abs() < 1e-15);
        let a = variance_identity_audit(&Op::identity(2), &z, &plus(), &plus()).unwrap();
        assert!((a.lhs - 1.0).abs() < 1e-15 && a.paper_rhs.abs() < 1e-15 && a.corrected_holds);
    }

    #[test]
    fn random_product_states_follow_the_expansion() {
        let s = variance_audit_sweep::<f64>(2, 3, 500, 11).unwrap();
        assert_eq!(s.corrected_failures, 0);
        assert!(s.paper_failures > 400);
        assert!(variance_audit_sweep::<f64>(2, 3, 0, 11).is_err());
    }

    #[test]
    fn small_audit_runs_clean() {
        let cfg = AuditConfig { n1: 2, n2: 3, count: 60, seed: 3 };
        let a = bound_audit_sweep::<f64>(cfg).unwrap();
        assert_eq!(a.summary.robertson.violations, 0);
        assert!(a.summary.yanase.applicable >= 40);
        assert!(a.summary.simplified.applicable >= 20);
        assert_eq!(a, bound_audit_sweep::<f64>(cfg).unwrap());
        assert!(bound_audit_sweep::<f64>(AuditConfig { count: 0, ..cfg }).is_err());
    }
}
