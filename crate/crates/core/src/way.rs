//! Executable form of the multiplicative no-go theorem: hypothesis checks,
//! the matrix-element identity that conservation forces, the pointer Gram
//! rank argument and a randomized search for counterexamples.
//!
//! Hypotheses: `L^A⊗L^B` conserved by `Û`; `L^B` of full rank; all
//! eigenvalues of `L^A` and `L^B` positive; `n2 < 2·n1`. Conclusion: an exact
//! nondestructive measurement of `Ô` forces `[Ô, L^A] = 0`.
//!
//! The constant-case condition of the proof is written there in terms of
//! `⟨v(i)|L^A|v(j)⟩`; dimensional consistency requires `L^B`, which is what
//! [`pointer_gram_rank`] uses.

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commutant::{commutant_unitary_with, conserved_eigenspaces};
use crate::error::{Error, Result};
use crate::linalg::{
    commutator, haar_state_with, haar_unitary_with, hermitian_eigensystem, inner_raw, numerical_rank, Operator,
    StateVector, ToleranceConfig,
};
use crate::measurement::{
    check_conserved, check_nondestructive, exactness_of, ConservationKind, ConservationReport, ConservedQuantity,
    MeasurementModel, PointerFamily,
};
use crate::random::{random_positive_operator, seeded_rng};
use crate::scalar::{c, re, Real};

/// `‖[Ô, L^A]‖_F` above which an exact, nondestructive, conforming trial is a
/// counterexample in [`counterexample_sweep`].
pub const COUNTEREXAMPLE_COMMUTATOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidualTable<T: Real = f64> {
    /// `R(i,j) = ⟨u(i)|L^A|u(j)⟩·(⟨v|L^B|v⟩ − ⟨v(i)|L^B|v(j)⟩)`
    pub residuals: Vec<Vec<Complex<T>>>,
    pub max_abs: T,
}

fn require_multiplicative<T: Real>(q: &ConservedQuantity<T>) -> Result<()> {
    match q.kind {
        ConservationKind::Multiplicative => Ok(()),
        ConservationKind::Additive => Err(Error::Precondition {
            check: "multiplicative",
            detail: "the conserved quantity must be multiplicative".into(),
        }),
    }
}

/// Residuals of the identity `⟨u(i)|L^A|u(j)⟩⟨v|L^B|v⟩ = ⟨u(i)|L^A|u(j)⟩⟨v(i)|L^B|v(j)⟩`,
/// which holds exactly for nondestructive, conserving schemes.
pub fn matrix_element_identity<T: Real>(
    m: &MeasurementModel<T>,
    q: &ConservedQuantity<T>,
    tol: T,
) -> Result<IdentityResidualTable<T>> {
    require_multiplicative(q)?;
    let nd = check_nondestructive(m, tol);
    if !nd.verdict {
        return Err(Error::Precondition {
            check: "check_nondestructive",
            detail: format!("leakage {:e} exceeds {:e}", nd.leakage.as_f64(), tol.as_f64()),
        });
    }
    let pointers = nd.pointer_family()?;
    let cons = check_conserved(m, q, tol)?;
    if !cons.verdict {
        return Err(Error::Precondition {
            check: "check_conserved",
            detail: format!("residual {:e} exceeds {:e}", cons.residual.as_f64(), tol.as_f64()),
        });
    }

    let v = m.ready_state().amplitudes();
    let lb_ready = inner_raw(v, &q.lb.apply_raw(v));
    let lb_pointers = lb_gram(&q.lb, &pointers.pointers);
    let basis = m.system_basis();
    let mut max_abs = T::zero();
    let residuals = (0..m.n1())
        .map(|i| {
            (0..m.n1())
                .map(|j| {
                    let la_ij = inner_raw(basis[i].amplitudes(), &q.la.apply_raw(basis[j].amplitudes()));
                    let r = la_ij * (lb_ready - lb_pointers[i][j]);
                    max_abs = max_abs.max(r.norm());
                    r
                })
                .collect()
        })
        .collect();
    Ok(IdentityResidualTable { residuals, max_abs })
}

fn lb_gram<T: Real>(lb: &Operator<T>, pointers: &[StateVector<T>]) -> Vec<Vec<Complex<T>>> {
    pointers
        .iter()
        .map(|a| pointers.iter().map(|b| inner_raw(a.amplitudes(), &lb.apply_raw(b.amplitudes()))).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramRankReport<T: Real = f64> {
    /// `B(i,j) = ⟨v(i)|L^B|v(j)⟩`
    pub gram_lb: Vec<Vec<Complex<T>>>,
    pub rank: usize,
    /// All entries of `B` equal within tolerance.
    pub constant_case: bool,
    /// `false` only if `constant_case` holds but the computed rank exceeds 1.
    pub rank_consistent: bool,
}

/// Rank of the `L^B` Gram matrix over the pointer states.
pub fn pointer_gram_rank<T: Real>(lb: &Operator<T>, pointers: &PointerFamily<T>, tol: T) -> Result<GramRankReport<T>> {
    if let Some(bad) = pointers.pointers.iter().find(|p| p.dim() != lb.dim()) {
        return Err(Error::DimensionMismatch { op: "pointer_gram_rank", left: lb.dim(), right: bad.dim() });
    }
    Ok(gram_rank(lb_gram(lb, &pointers.pointers), tol))
}

/// Rank analysis of an explicit Gram matrix.
pub fn gram_rank<T: Real>(gram_lb: Vec<Vec<Complex<T>>>, tol: T) -> GramRankReport<T> {
    let n = gram_lb.len();
    let entries: Vec<Complex<T>> = gram_lb.iter().flatten().copied().collect();
    let rank = Operator::from_row_major(n, entries.clone()).map(|b| numerical_rank(&b, tol)).unwrap_or(0);
    let first = entries.first().copied().unwrap_or(re(T::zero()));
    let constant_case = entries.iter().all(|z| (*z - first).norm() <= tol);
    let rank_consistent = !constant_case || rank <= 1;
    debug_assert!(rank_consistent, "constant Gram matrix with rank {rank}");
    GramRankReport { gram_lb, rank, constant_case, rank_consistent }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    AssumptionsViolated,
    Consistent,
    /// Every hypothesis holds and `[Ô, L^A] ≠ 0`: a falsification.
    Contradiction,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Self::AssumptionsViolated => "assumptions_violated",
            Self::Consistent => "consistent",
            Self::Contradiction => "contradiction",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionCheck<T> {
    pub name: &'static str,
    /// `None` when the quantity is undefined (degenerate pointers).
    pub residual: Option<T>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremVerdict<T: Real = f64> {
    /// In order: conservation, lb_full_rank, la_positive, lb_positive,
    /// dimension_bound, nondestructive, exact.
    pub assumptions: Vec<AssumptionCheck<T>>,
    /// `‖[Ô, L^A]‖_F` with `Ô` from the model's basis.
    pub commutator_norm: T,
    pub outcome: Outcome,
    /// Informational: the proof's counting argument only excludes
    /// `n2 ≤ 2·n1 − 2`; this records whether `n2 < 2·n1 − 1` holds. It does not
    /// gate the verdict.
    pub proof_counting_bound: bool,
}

impl<T: Real> TheoremVerdict<T> {
    pub fn assumption(&self, name: &str) -> Option<&AssumptionCheck<T>> {
        self.assumptions.iter().find(|a| a.name == name)
    }

    pub fn all_assumptions_hold(&self) -> bool {
        self.assumptions.iter().all(|a| a.passed)
    }
}

pub fn theorem_verdict<T: Real>(
    m: &MeasurementModel<T>,
    q: &ConservedQuantity<T>,
    tol: T,
) -> Result<TheoremVerdict<T>> {
    require_multiplicative(q)?;
    let cfg = ToleranceConfig::default();
    let (n1, n2) = (m.n1(), m.n2());

    let cons = check_conserved(m, q, tol)?;
    let rank = numerical_rank(&q.lb, cfg.rank);
    let la_min = hermitian_eigensystem(&q.la, &cfg)?.values[0];
    let lb_min = hermitian_eigensystem(&q.lb, &cfg)?.values[0];
    let nd = check_nondestructive(m, tol);
    let deficit = nd.pointers.as_ref().map(|p| exactness_of(p, tol).deficit);

    let assumptions = vec![
        AssumptionCheck { name: "conservation", residual: Some(cons.residual), passed: cons.verdict },
        AssumptionCheck { name: "lb_full_rank", residual: Some(T::lit((n2 - rank) as f64)), passed: rank == n2 },
        AssumptionCheck { name: "la_positive", residual: Some(la_min), passed: la_min > cfg.rank },
        AssumptionCheck { name: "lb_positive", residual: Some(lb_min), passed: lb_min > cfg.rank },
        AssumptionCheck {
            name: "dimension_bound",
            residual: Some(T::lit(n2 as f64 - 2.0 * n1 as f64)),
            passed: n2 < 2 * n1,
        },
        AssumptionCheck { name: "nondestructive", residual: Some(nd.leakage), passed: nd.verdict },
        AssumptionCheck { name: "exact", residual: deficit, passed: deficit.is_some_and(|d| d <= tol) },
    ];
    let commutator_norm = commutator(&m.observable(), &q.la)?.frobenius_norm();
    let outcome = if !assumptions.iter().all(|a| a.passed) {
        Outcome::AssumptionsViolated
    } else if commutator_norm <= tol {
        Outcome::Consistent
    } else {
        Outcome::Contradiction
    };
    Ok(TheoremVerdict { assumptions, commutator_norm, outcome, proof_counting_bound: n2 + 1 < 2 * n1 })
}

/// Residual of the additive conservation law `Û†(L^A⊗1 + 1⊗L^B)Û = L^A⊗1 + 1⊗L^B`.
pub fn additive_conservation_check<T: Real>(
    m: &MeasurementModel<T>,
    q: &ConservedQuantity<T>,
    tol: T,
) -> Result<ConservationReport<T>> {
    if q.kind != ConservationKind::Additive {
        return Err(Error::Precondition {
            check: "additive",
            detail: "the conserved quantity must be additive".into(),
        });
    }
    check_conserved(m, q, tol)
}

/// How the interaction and system basis of a sweep trial were drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialFlavor {
    /// Haar-random system basis, Haar-random commutant unitary.
    RandomBasis,
    /// System basis = eigenbasis of `L^A`, Haar-random commutant unitary.
    ConservedBasis,
    /// System basis = eigenbasis of `L^A` with an exact nondestructive
    /// conserving scheme (needs `n1 ≤ n2`; otherwise falls back to
    /// `ConservedBasis`).
    ExactScheme,
}

impl TrialFlavor {
    pub fn name(self) -> &'static str {
        match self {
            Self::RandomBasis => "random_basis",
            Self::ConservedBasis => "conserved_basis",
            Self::ExactScheme => "exact_scheme",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleTrial<T: Real = f64> {
    pub trial: usize,
    pub flavor: TrialFlavor,
    pub leakage: T,
    pub deficit: Option<T>,
    pub commutator_norm: T,
    pub outcome: Outcome,
    pub counterexample: bool,
}

impl<T: Real> CounterexampleTrial<T> {
    pub fn exact_nondestructive(&self, tol: T) -> bool {
        self.leakage <= tol && self.deficit.is_some_and(|d| d <= tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleSweep<T: Real = f64> {
    pub n1: usize,
    pub n2: usize,
    pub count: usize,
    pub seed: u64,
    pub tol: T,
    pub trials: Vec<CounterexampleTrial<T>>,
    pub contradictions: usize,
    pub counterexamples: usize,
    /// Trials that are exact and nondestructive within `tol`.
    pub exact_found: usize,
    /// Largest `‖[Ô, L^A]‖_F` among those trials.
    pub max_exact_commutator: Option<T>,
}

/// Exact nondestructive conserving scheme built in the eigenbases of `la`
/// and `lb`: `Û = Σᵢ |aᵢ⟩⟨aᵢ| ⊗ Wᵢ` with `Wᵢ` diagonal in the `lb` basis
/// carrying the discrete Fourier phases `exp(2πi·kᵢ·m/n2)`, and a ready state
/// with equal weight on every `lb` eigenvector. Distinct frequencies `kᵢ`
/// make the pointers `Wᵢv` orthonormal. Returns `(Û, v, la eigenbasis)`.
pub(crate) type Scheme<T> = (Operator<T>, StateVector<T>, Vec<StateVector<T>>);

pub(crate) fn fourier_scheme<T: Real>(la: &Operator<T>, lb: &Operator<T>, rng: &mut ChaCha8Rng) -> Result<Scheme<T>> {
    let cfg = ToleranceConfig::default();
    let (n1, n2) = (la.dim(), lb.dim());
    if n1 > n2 {
        return Err(Error::InvalidArgument("an exact scheme needs n1 <= n2".into()));
    }
    let sys = hermitian_eigensystem(la, &cfg)?.vectors;
    let app = hermitian_eigensystem(lb, &cfg)?.vectors;
    let mut freqs: Vec<usize> = (0..n2).collect();
    freqs.shuffle(rng);
    let phases: Operator<T> = haar_unitary_with(1, rng);
    let weight = T::one() / T::lit(n2 as f64).sqrt();
    let mut ready = vec![re(T::zero()); n2];
    for f in &app {
        let phase = {
            let z: Operator<T> = haar_unitary_with(1, rng);
            z[(0, 0)]
        };
        for (r, a) in ready.iter_mut().zip(f.amplitudes()) {
            *r += *a * phase * re(weight);
        }
    }
    let ready = StateVector::normalized(ready)?;

    let two_pi = T::lit(2.0) * T::PI();
    let mut u = Operator::zeros(n1 * n2);
    for (i, a) in sys.iter().enumerate() {
        let mut w = Operator::zeros(n2);
        for (m, f) in app.iter().enumerate() {
            let angle = two_pi * T::lit((freqs[i] * m) as f64) / T::lit(n2 as f64);
            let p = Operator::outer(f, f)?.scale(c(angle.cos(), angle.sin()) * phases[(0, 0)]);
            w = &w + &p;
        }
        let block = crate::linalg::tensor_product(&Operator::outer(a, a)?, &w);
        u = &u + &block;
    }
    Ok((u, ready, sys))
}

fn sweep_trial<T: Real>(n1: usize, n2: usize, trial: usize, seed: u64, tol: T) -> Result<CounterexampleTrial<T>> {
    let cfg = ToleranceConfig::default();
    let mut rng = seeded_rng(seed, trial as u64);
    let la: Operator<T> = random_positive_operator(n1, &mut rng);
    let lb: Operator<T> = random_positive_operator(n2, &mut rng);
    let q = ConservedQuantity::new(ConservationKind::Multiplicative, la, lb, &cfg)?;

    let mut flavor = match trial % 3 {
        0 => TrialFlavor::RandomBasis,
        1 => TrialFlavor::ConservedBasis,
        _ => TrialFlavor::ExactScheme,
    };
    if flavor == TrialFlavor::ExactScheme && n1 > n2 {
        flavor = TrialFlavor::ConservedBasis;
    }
    let (u, ready, basis) = match flavor {
        TrialFlavor::ExactScheme => fourier_scheme(&q.la, &q.lb, &mut rng)?,
        _ => {
            let d = conserved_eigenspaces(&q, &cfg)?;
            let u = commutant_unitary_with(&d, &mut rng);
            let ready = haar_state_with(n2, &mut rng);
            let basis = if flavor == TrialFlavor::RandomBasis {
                let w: Operator<T> = haar_unitary_with(n1, &mut rng);
                (0..n1).map(|j| StateVector::normalized(w.column(j))).collect::<Result<Vec<_>>>()?
            } else {
                hermitian_eigensystem(&q.la, &cfg)?.vectors
            };
            (u, ready, basis)
        }
    };
    let m = MeasurementModel::new(basis, ready, u, &cfg)?;
    let verdict = theorem_verdict(&m, &q, tol)?;
    let leakage = verdict.assumption("nondestructive").and_then(|a| a.residual).expect("always computed");
    let deficit = verdict.assumption("exact").and_then(|a| a.residual);
    let counterexample = leakage <= tol
        && deficit.is_some_and(|d| d <= tol)
        && verdict.commutator_norm > T::lit(COUNTEREXAMPLE_COMMUTATOR);
    Ok(CounterexampleTrial {
        trial,
        flavor,
        leakage,
        deficit,
        commutator_norm: verdict.commutator_norm,
        outcome: verdict.outcome,
        counterexample,
    })
}

/// Randomized falsification run over `count` seeded trials.
///
/// Each trial draws positive `L^A`, `L^B` (spectra in [0.5, 2]) and a
/// conserving interaction, cycling through the [`TrialFlavor`]s. Trials use
/// independent streams of `seed`, so the report does not depend on thread
/// scheduling.
pub fn counterexample_sweep<T: Real>(
    n1: usize,
    n2: usize,
    count: usize,
    seed: u64,
    tol: T,
) -> Result<CounterexampleSweep<T>> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::ZeroDimension);
    }
    if n2 >= 2 * n1 {
        return Err(Error::Precondition {
            check: "dimension_bound",
            detail: format!("n2 = {n2} must be below 2·n1 = {}", 2 * n1),
        });
    }
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let trials: Vec<CounterexampleTrial<T>> =
        (0..count).into_par_iter().map(|t| sweep_trial(n1, n2, t, seed, tol)).collect::<Result<_>>()?;
    let contradictions = trials.iter().filter(|t| t.outcome == Outcome::Contradiction).count();
    let counterexamples = trials.iter().filter(|t| t.counterexample).count();
    let exact: Vec<&CounterexampleTrial<T>> = trials.iter().filter(|t| t.exact_nondestructive(tol)).collect();
    let max_exact_commutator = exact.iter().map(|t| t.commutator_norm).reduce(T::max);
    Ok(CounterexampleSweep {
        n1,
        n2,
        count,
        seed,
        tol,
        exact_found: exact.len(),
        trials,
        contradictions,
        counterexamples,
        max_exact_commutator,
    })
}

/// Random exact nondestructive conserving model whose observable commutes
/// with `L^A`, with positive `L^A`, `L^B`. Requires `n1 ≤ n2`.
pub fn random_exact_commuting_model<T: Real>(
    n1: usize,
    n2: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(MeasurementModel<T>, ConservedQuantity<T>)> {
    let cfg = ToleranceConfig::default();
    let la: Operator<T> = random_positive_operator(n1, rng);
    let lb: Operator<T> = random_positive_operator(n2, rng);
    let q = ConservedQuantity::new(ConservationKind::Multiplicative, la, lb, &cfg)?;
    let (u, ready, basis) = fourier_scheme(&q.la, &q.lb, rng)?;
    Ok((MeasurementModel::new(basis, ready, u, &cfg)?, q))
}
