//! Multi-start descent over the commutant of a conserved quantity.
//!
//! Iterates are `U ← U·exp(K)` with `K` a block-diagonal anti-Hermitian
//! generator, so every iterate stays conserving. Gradients are central finite
//! differences along an orthonormal generator basis; the step is scaled so the
//! largest parameter moves `step` radians, halves when the objective goes up
//! and recovers by ×1.5 (never above the initial step) after an accepted move.

use num_complex::Complex;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    anti_hermitian_exp, commutator, haar_state_with, hermitian_eigensystem, inner_raw, kron_raw, norm_raw,
    numerical_rank, tensor_product, Operator, StateVector, ToleranceConfig,
};
use crate::measurement::{exactness_of, joint_blocks_raw, nondestructive_from_blocks, ConservedQuantity};
use crate::random::seeded_rng;
use crate::scalar::{re, Real};

use super::{anti_hermitian_basis, commutant_unitary_with, conserved_eigenspaces, BlockDecomposition};

/// Objective value every restart must stay above when the no-go theorem applies.
pub const FEASIBILITY_FLOOR: f64 = 1e-3;
/// `‖[o, L^A]‖_F` at or above which the floor is asserted.
pub const NO_GO_COMMUTATOR_THRESHOLD: f64 = 0.5;
/// Consecutive iterations with improvement below `ftol` that count as converged.
const STALL_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig<T> {
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    /// Initial step, in radians along the largest gradient component.
    pub step: T,
    pub ftol: T,
    /// Finite-difference step for gradient estimates.
    pub fd_step: T,
}

impl<T: Real> Default for SearchConfig<T> {
    fn default() -> Self {
        Self { seed: 0, restarts: 8, max_iter: 2000, step: T::lit(0.1), ftol: T::lit(1e-12), fd_step: T::lit(1e-6) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult<T: Real = f64> {
    pub best_unitary: Operator<T>,
    /// Ready state at the optimum (fixed input for [`minimize_epsilon`]).
    pub best_ready_state: StateVector<T>,
    pub best_objective: T,
    /// Accepted `(iteration, objective)` pairs of the winning restart.
    pub objective_trace: Vec<(usize, T)>,
    /// Final objective of every restart, in restart order.
    pub restart_objectives: Vec<T>,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub iterations: usize,
    pub converged: bool,
}

struct Outcome<T: Real> {
    unitary: Operator<T>,
    ready: StateVector<T>,
    objective: T,
    trace: Vec<(usize, T)>,
    iterations: usize,
    converged: bool,
}

type Objective<'a, T> = dyn Fn(&Operator<T>, &[Complex<T>]) -> T + Sync + 'a;

struct Problem<'a, T: Real> {
    decomposition: BlockDecomposition<T>,
    generators: Vec<Operator<T>>,
    /// Generators acting on the ready state; empty when it is held fixed.
    ready_generators: Vec<Operator<T>>,
    objective: &'a Objective<'a, T>,
}

fn combine<T: Real>(gens: &[Operator<T>], coeffs: &[T], dim: usize) -> Operator<T> {
    gens.iter().zip(coeffs).fold(Operator::zeros(dim), |acc, (g, &t)| &acc + &g.scale_real(t))
}

fn exp_pairs<T: Real>(gens: &[Operator<T>], h: T) -> Result<Vec<(Operator<T>, Operator<T>)>> {
    let tol = ToleranceConfig::default();
    gens.iter()
        .map(|g| Ok((anti_hermitian_exp(&g.scale_real(h), &tol)?, anti_hermitian_exp(&g.scale_real(-h), &tol)?)))
        .collect()
}

impl<T: Real> Problem<'_, T> {
    fn run(&self, mut u: Operator<T>, mut v: StateVector<T>, config: &SearchConfig<T>) -> Result<Outcome<T>> {
        let tol = ToleranceConfig::default();
        let h = config.fd_step;
        let two_h = h + h;
        let shifts = exp_pairs(&self.generators, h)?;
        let ready_shifts = exp_pairs(&self.ready_generators, h)?;
        let n = self.decomposition.total_dim;
        let n2 = v.dim();

        let f = self.objective;
        let mut value = f(&u, v.amplitudes());
        let mut trace = vec![(0, value)];
        let mut step = config.step;
        let mut stall = 0;
        let mut converged = false;
        let mut iterations = 0;

        for it in 1..=config.max_iter {
            iterations = it;
            let mut grad: Vec<T> = shifts
                .iter()
                .map(|(plus, minus)| (f(&(&u * plus), v.amplitudes()) - f(&(&u * minus), v.amplitudes())) / two_h)
                .collect();
            let ready_grad: Vec<T> = ready_shifts
                .iter()
                .map(|(plus, minus)| {
                    (f(&u, &plus.apply_raw(v.amplitudes())) - f(&u, &minus.apply_raw(v.amplitudes()))) / two_h
                })
                .collect();
            grad.extend(&ready_grad);
            let gmax = grad.iter().fold(T::zero(), |m, g| m.max(g.abs()));
            if gmax == T::zero() {
                converged = true;
                break;
            }
            let theta: Vec<T> = grad.iter().map(|g| -step * *g / gmax).collect();
            let (theta_u, theta_v) = theta.split_at(self.generators.len());

            let k = combine(&self.generators, theta_u, n);
            let candidate_u = self.decomposition.restore(&(&u * &anti_hermitian_exp(&k, &tol)?));
            let candidate_v = if self.ready_generators.is_empty() {
                v.clone()
            } else {
                let kv = combine(&self.ready_generators, theta_v, n2);
                StateVector::normalized(anti_hermitian_exp(&kv, &tol)?.apply_raw(v.amplitudes()))?
            };
            let candidate = f(&candidate_u, candidate_v.amplitudes());

            let improvement = if candidate < value {
                let gain = value - candidate;
                u = candidate_u;
                v = candidate_v;
                value = candidate;
                trace.push((it, value));
                step = (step * T::lit(1.5)).min(config.step);
                gain
            } else {
                step *= T::lit(0.5);
                T::zero()
            };
            stall = if improvement < config.ftol { stall + 1 } else { 0 };
            if stall >= STALL_LIMIT {
                converged = true;
                break;
            }
        }
        Ok(Outcome { unitary: u, ready: v, objective: value, trace, iterations, converged })
    }

    fn multistart(
        &self,
        config: &SearchConfig<T>,
        init_ready: &(dyn Fn(&mut ChaCha8Rng) -> StateVector<T> + Sync),
    ) -> Result<SearchResult<T>> {
        if config.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        let outcomes: Vec<Outcome<T>> = (0..config.restarts)
            .into_par_iter()
            .map(|r| {
                let mut rng = seeded_rng(config.seed, r as u64);
                let u0 = commutant_unitary_with(&self.decomposition, &mut rng);
                let v0 = init_ready(&mut rng);
                self.run(u0, v0, config)
            })
            .collect::<Result<_>>()?;

        let restart_objectives: Vec<T> = outcomes.iter().map(|o| o.objective).collect();
        let best_restart = (0..outcomes.len())
            .min_by(|&a, &b| {
                outcomes[a].objective.partial_cmp(&outcomes[b].objective).expect("finite objective").then(a.cmp(&b))
            })
            .expect("at least one restart");
        let best = outcomes.into_iter().nth(best_restart).expect("index in range");
        Ok(SearchResult {
            best_unitary: best.unitary,
            best_ready_state: best.ready,
            best_objective: best.objective,
            objective_trace: best.trace,
            restart_objectives,
            restarts_used: config.restarts,
            best_restart,
            iterations: best.iterations,
            converged: best.converged,
        })
    }
}

/// The `la` eigenbasis plus every pairwise equal-weight superposition.
pub fn default_probe_states<T: Real>(la: &Operator<T>) -> Result<Vec<StateVector<T>>> {
    let es = hermitian_eigensystem(la, &ToleranceConfig::default())?;
    let mut out = es.vectors.clone();
    for i in 0..es.vectors.len() {
        for j in (i + 1)..es.vectors.len() {
            let sum: Vec<Complex<T>> =
                es.vectors[i].amplitudes().iter().zip(es.vectors[j].amplitudes()).map(|(a, b)| *a + *b).collect();
            out.push(StateVector::normalized(sum)?);
        }
    }
    Ok(out)
}

fn check_hermitian<T: Real>(op: &Operator<T>, dim: usize, what: &'static str) -> Result<()> {
    if op.dim() != dim {
        return Err(Error::DimensionMismatch { op: what, left: dim, right: op.dim() });
    }
    let residual = op.hermiticity_residual();
    if residual > ToleranceConfig::<T>::default().hermiticity {
        return Err(Error::NotHermitian { residual: residual.as_f64() });
    }
    Ok(())
}

/// Minimizes the mean of `ε(ψ)² = ⟨ψ⊗v|N²|ψ⊗v⟩` over `probe_states`, where
/// `N = Û†(1⊗probe)Û − o⊗1` and `Û` ranges over the commutant of `q`.
pub fn minimize_epsilon<T: Real>(
    q: &ConservedQuantity<T>,
    o: &Operator<T>,
    probe: &Operator<T>,
    ready_state: &StateVector<T>,
    probe_states: &[StateVector<T>],
    config: &SearchConfig<T>,
) -> Result<SearchResult<T>> {
    let (n1, n2) = (q.la.dim(), q.lb.dim());
    check_hermitian(o, n1, "observable")?;
    check_hermitian(probe, n2, "probe")?;
    if ready_state.dim() != n2 {
        return Err(Error::DimensionMismatch { op: "ready_state", left: n2, right: ready_state.dim() });
    }
    if probe_states.is_empty() {
        return Err(Error::InvalidArgument("at least one probe state is required".into()));
    }
    if let Some(bad) = probe_states.iter().find(|s| s.dim() != n1) {
        return Err(Error::DimensionMismatch { op: "probe state", left: n1, right: bad.dim() });
    }

    let tol = ToleranceConfig::default();
    let decomposition = conserved_eigenspaces(q, &tol)?;
    let lifted_probe = tensor_product(&Operator::identity(n1), probe);
    let lifted_o = tensor_product(o, &Operator::identity(n2));
    let count = T::lit(probe_states.len() as f64);

    let objective = |u: &Operator<T>, v: &[Complex<T>]| -> T {
        let uh = u.adjoint();
        probe_states
            .iter()
            .map(|psi| {
                let x = kron_raw(psi.amplitudes(), v);
                let heis = uh.apply_raw(&lifted_probe.apply_raw(&u.apply_raw(&x)));
                let target = lifted_o.apply_raw(&x);
                let noise: Vec<Complex<T>> = heis.iter().zip(&target).map(|(a, b)| *a - *b).collect();
                norm_raw(&noise).powi(2)
            })
            .sum::<T>()
            / count
    };
    let problem = Problem {
        generators: decomposition.generators(),
        decomposition,
        ready_generators: Vec::new(),
        objective: &objective,
    };
    let ready = ready_state.clone();
    problem.multistart(config, &move |_| ready.clone())
}

/// Outcome of [`feasibility_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult<T: Real = f64> {
    pub search: SearchResult<T>,
    /// `maxᵢ≠ⱼ ‖w(i,j)‖` at the optimum.
    pub leakage: T,
    /// `‖G − I‖_F` of the normalized pointers at the optimum (`None` if degenerate).
    pub deficit: Option<T>,
    /// `‖[o, L^A]‖_F`
    pub commutator_norm: T,
    /// `n2 < 2·n1`, `L^A > 0`, `L^B > 0` and `L^B` full rank.
    pub within_hypotheses: bool,
    /// `Some(every restart stayed above FEASIBILITY_FLOOR)` when the theorem
    /// applies and `‖[o, L^A]‖_F ≥ NO_GO_COMMUTATOR_THRESHOLD`; `None` otherwise.
    pub floor_holds: Option<bool>,
}

/// Searches the commutant of `q` (and the apparatus ready state) for an exact
/// nondestructive measurement of `o`.
///
/// The objective is `Σᵢ≠ⱼ ‖w(i,j)‖² + ‖G̃ − I‖_F²` with `G̃ᵢⱼ = ⟨w(i,i)|w(j,j)⟩`
/// taken over the eigenbasis of `o`. It vanishes exactly on exact
/// nondestructive schemes and, unlike the max-leakage / normalized-Gram form,
/// is smooth everywhere.
pub fn feasibility_search<T: Real>(
    q: &ConservedQuantity<T>,
    o: &Operator<T>,
    n2: usize,
    config: &SearchConfig<T>,
) -> Result<FeasibilityResult<T>> {
    let n1 = q.la.dim();
    if q.lb.dim() != n2 {
        return Err(Error::DimensionMismatch { op: "conserved LB", left: n2, right: q.lb.dim() });
    }
    check_hermitian(o, n1, "observable")?;
    let tol = ToleranceConfig::default();
    let basis = hermitian_eigensystem(o, &tol)?.vectors;
    let decomposition = conserved_eigenspaces(q, &tol)?;

    let objective = |u: &Operator<T>, v: &[Complex<T>]| -> T {
        let blocks = joint_blocks_raw(&basis, v, u);
        let mut acc = T::zero();
        for i in 0..n1 {
            for j in 0..n1 {
                if i != j {
                    acc += blocks.norm(i, j).powi(2);
                }
                let mut g = inner_raw(blocks.block(i, i), blocks.block(j, j));
                if i == j {
                    g -= re(T::one());
                }
                acc += g.norm_sqr();
            }
        }
        acc
    };
    let problem = Problem {
        generators: decomposition.generators(),
        decomposition,
        ready_generators: anti_hermitian_basis(n2),
        objective: &objective,
    };
    let search = problem.multistart(config, &|rng| haar_state_with(n2, rng))?;

    let blocks = joint_blocks_raw(&basis, search.best_ready_state.amplitudes(), &search.best_unitary);
    let report = nondestructive_from_blocks(&blocks, tol.conservation);
    let deficit = report.pointers.as_ref().map(|p| exactness_of(p, tol.conservation).deficit);
    let commutator_norm = commutator(o, &q.la)?.frobenius_norm();

    let positive = |op: &Operator<T>| -> Result<bool> { Ok(hermitian_eigensystem(op, &tol)?.values[0] > tol.rank) };
    let within_hypotheses =
        n2 < 2 * n1 && positive(&q.la)? && positive(&q.lb)? && numerical_rank(&q.lb, tol.rank) == n2;
    let floor_holds = (within_hypotheses && commutator_norm >= T::lit(NO_GO_COMMUTATOR_THRESHOLD))
        .then(|| search.restart_objectives.iter().all(|&f| f > T::lit(FEASIBILITY_FLOOR)));

    Ok(FeasibilityResult { leakage: report.leakage, deficit, commutator_norm, within_hypotheses, floor_holds, search })
}
