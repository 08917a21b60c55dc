//! Unitaries that commute with a conserved quantity.
//!
//! `[Û, L] = 0` holds exactly when `Û` is block diagonal on the eigenspaces
//! of `L`. A [`BlockDecomposition`] records those eigenspaces; sampling and
//! optimization both work in the block basis and map back.

mod search;

pub use search::{
    default_probe_states, feasibility_search, minimize_epsilon, FeasibilityResult, SearchConfig, SearchResult,
    FEASIBILITY_FLOOR, NO_GO_COMMUTATOR_THRESHOLD,
};

use num_complex::Complex;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    haar_unitary_with, hermitian_eigensystem, inner_raw, norm_raw, Operator, StateVector, ToleranceConfig,
};
use crate::measurement::ConservedQuantity;
use crate::random::seeded_rng;
use crate::scalar::{c, re, Real};

/// One eigenspace of the conserved operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBlock<T: Real = f64> {
    pub eigenvalue: T,
    pub basis: Vec<StateVector<T>>,
}

impl<T: Real> EigenBlock<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition<T: Real = f64> {
    pub blocks: Vec<EigenBlock<T>>,
    pub total_dim: usize,
}

impl<T: Real> BlockDecomposition<T> {
    /// Groups the spectrum of a Hermitian operator into eigenspaces.
    ///
    /// Sorted eigenvalues start a new block whenever the gap to their
    /// predecessor exceeds `tol.grouping`; a block's eigenvalue is the mean
    /// of its members.
    pub fn from_operator(l: &Operator<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        let es = hermitian_eigensystem(l, tol)?;
        let mut blocks: Vec<(Vec<T>, Vec<StateVector<T>>)> = Vec::new();
        let mut prev: Option<T> = None;
        for (lambda, v) in es.values.into_iter().zip(es.vectors) {
            match (prev, blocks.last_mut()) {
                (Some(p), Some(last)) if lambda - p <= tol.grouping => {
                    last.0.push(lambda);
                    last.1.push(v);
                }
                _ => blocks.push((vec![lambda], vec![v])),
            }
            prev = Some(lambda);
        }
        let blocks = blocks
            .into_iter()
            .map(|(values, basis)| {
                let mean = values.iter().copied().sum::<T>() / T::lit(values.len() as f64);
                EigenBlock { eigenvalue: mean, basis }
            })
            .collect();
        Ok(Self { blocks, total_dim: l.dim() })
    }

    /// Matrix whose columns are the block bases, concatenated in block order.
    pub fn basis_matrix(&self) -> Operator<T> {
        let cols: Vec<Vec<Complex<T>>> =
            self.blocks.iter().flat_map(|b| b.basis.iter().map(|v| v.amplitudes().to_vec())).collect();
        Operator::from_columns(&cols).expect("blocks span the space")
    }

    /// `(offset, dim)` of every block in the concatenated basis.
    pub fn ranges(&self) -> Vec<(usize, usize)> {
        let mut offset = 0;
        self.blocks
            .iter()
            .map(|b| {
                let r = (offset, b.dim());
                offset += b.dim();
                r
            })
            .collect()
    }

    /// `Σ λ_b B_b B_b†`; equals the decomposed operator up to grouping error.
    pub fn reconstruct(&self) -> Operator<T> {
        let n = self.total_dim;
        let mut out = Operator::zeros(n);
        for b in &self.blocks {
            for v in &b.basis {
                let p = Operator::outer(v, v).expect("same dimension");
                out = &out + &p.scale_real(b.eigenvalue);
            }
        }
        out
    }

    /// Real dimension of the commutant: `Σ d_b²`.
    pub fn parameter_count(&self) -> usize {
        self.blocks.iter().map(|b| b.dim() * b.dim()).sum()
    }

    /// Orthonormal (Frobenius) basis of the block-diagonal anti-Hermitian
    /// generators, expressed in the original basis.
    pub fn generators(&self) -> Vec<Operator<T>> {
        let v = self.basis_matrix();
        let vh = v.adjoint();
        let mut out = Vec::with_capacity(self.parameter_count());
        for (offset, d) in self.ranges() {
            for g in anti_hermitian_basis::<T>(d) {
                let mut local = Operator::zeros(self.total_dim);
                for i in 0..d {
                    for j in 0..d {
                        local[(offset + i, offset + j)] = g[(i, j)];
                    }
                }
                out.push(&v * &(&local * &vh));
            }
        }
        out
    }

    /// Zeroes cross-block entries of `a` (expressed in the block basis).
    fn block_diagonal_part(&self, a_block: &Operator<T>) -> Operator<T> {
        let mut out = Operator::zeros(self.total_dim);
        for (offset, d) in self.ranges() {
            for i in offset..offset + d {
                for j in offset..offset + d {
                    out[(i, j)] = a_block[(i, j)];
                }
            }
        }
        out
    }

    /// Projects a near-commuting unitary back onto the commutant: cross-block
    /// entries are dropped and each diagonal block is re-orthonormalized.
    pub fn restore(&self, u: &Operator<T>) -> Operator<T> {
        let v = self.basis_matrix();
        let vh = v.adjoint();
        let mut inner = self.block_diagonal_part(&(&vh * &(u * &v)));
        for (offset, d) in self.ranges() {
            let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(d);
            for j in 0..d {
                let mut col: Vec<Complex<T>> = (0..d).map(|i| inner[(offset + i, offset + j)]).collect();
                for _ in 0..2 {
                    for prev in &cols {
                        let overlap = inner_raw(prev, &col);
                        for (x, y) in col.iter_mut().zip(prev) {
                            *x -= *y * overlap;
                        }
                    }
                }
                let inv = T::one() / norm_raw(&col);
                cols.push(col.into_iter().map(|z| z * inv).collect());
            }
            for (j, col) in cols.iter().enumerate() {
                for (i, z) in col.iter().enumerate() {
                    inner[(offset + i, offset + j)] = *z;
                }
            }
        }
        &v * &(&inner * &vh)
    }
}

/// Anti-Hermitian basis of `d×d` matrices: `iE_kk`, `(E_kl − E_lk)/√2`,
/// `i(E_kl + E_lk)/√2`.
fn anti_hermitian_basis<T: Real>(d: usize) -> Vec<Operator<T>> {
    let mut out = Vec::with_capacity(d * d);
    let h = T::one() / T::lit(2.0).sqrt();
    for k in 0..d {
        let mut g = Operator::zeros(d);
        g[(k, k)] = c(T::zero(), T::one());
        out.push(g);
    }
    for k in 0..d {
        for l in (k + 1)..d {
            let mut g = Operator::zeros(d);
            g[(k, l)] = re(h);
            g[(l, k)] = re(-h);
            out.push(g);
            let mut g = Operator::zeros(d);
            g[(k, l)] = c(T::zero(), h);
            g[(l, k)] = c(T::zero(), h);
            out.push(g);
        }
    }
    out
}

/// Eigenspaces of the joint conserved operator (product or sum form).
pub fn conserved_eigenspaces<T: Real>(
    q: &ConservedQuantity<T>,
    tol: &ToleranceConfig<T>,
) -> Result<BlockDecomposition<T>> {
    BlockDecomposition::from_operator(&q.joint_operator(), tol)
}

/// `Σ_b B_b·H_b·B_b†` with an independent Haar unitary `H_b` per block.
pub fn commutant_unitary_with<T: Real>(d: &BlockDecomposition<T>, rng: &mut ChaCha8Rng) -> Operator<T> {
    let mut inner = Operator::zeros(d.total_dim);
    for (offset, dim) in d.ranges() {
        let h: Operator<T> = haar_unitary_with(dim, rng);
        for i in 0..dim {
            for j in 0..dim {
                inner[(offset + i, offset + j)] = h[(i, j)];
            }
        }
    }
    let v = d.basis_matrix();
    &v * &(&inner * &v.adjoint())
}

/// Haar-random element of the commutant, reproducible for a given seed.
pub fn random_commutant_unitary<T: Real>(d: &BlockDecomposition<T>, seed: u64) -> Operator<T> {
    commutant_unitary_with(d, &mut seeded_rng(seed, 0))
}

/// Removes cross-block components of an anti-Hermitian generator so that its
/// exponential stays in the commutant.
pub fn project_generator<T: Real>(
    k: &Operator<T>,
    d: &BlockDecomposition<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Operator<T>> {
    if k.dim() != d.total_dim {
        return Err(Error::DimensionMismatch { op: "project_generator", left: d.total_dim, right: k.dim() });
    }
    let residual = k.anti_hermiticity_residual();
    if residual > tol.hermiticity {
        return Err(Error::NotAntiHermitian { residual: residual.as_f64() });
    }
    let v = d.basis_matrix();
    let vh = v.adjoint();
    let inner = d.block_diagonal_part(&(&vh * &(k * &v)));
    Ok((&v * &(&inner * &vh)).anti_hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{anti_hermitian_exp, commutator, tensor_product};
    use crate::random::random_hermitian;

    type Op = Operator<f64>;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn dims(d: &BlockDecomposition<f64>) -> Vec<usize> {
        d.blocks.iter().map(|b| b.dim()).collect()
    }

    #[test]
    fn eigenspace_examples() {
        let q = ConservedQuantity::multiplicative(Op::from_diagonal(&[1.0, 2.0]), Op::identity(2)).unwrap();
        let d = conserved_eigenspaces(&q, &tol()).unwrap();
        assert_eq!(dims(&d), vec![2, 2]);

        let q =
            ConservedQuantity::multiplicative(Op::from_diagonal(&[1.0, 2.0]), Op::from_diagonal(&[1.0, 2.0])).unwrap();
        let d = conserved_eigenspaces(&q, &tol()).unwrap();
        assert_eq!(dims(&d), vec![1, 2, 1]);
        assert_eq!(d.blocks.iter().map(|b| b.eigenvalue).collect::<Vec<_>>(), vec![1.0, 2.0, 4.0]);

        let d = BlockDecomposition::from_operator(&Op::from_diagonal(&[1.0, 1.0 + 1e-12]), &tol()).unwrap();
        assert_eq!(dims(&d), vec![2]);
    }

    #[test]
    fn reconstruction() {
        let l = tensor_product(&Op::from_diagonal(&[1.0, 2.0, 0.5]), &Op::from_diagonal(&[2.0, 1.0]));
        let d = BlockDecomposition::from_operator(&l, &tol()).unwrap();
        assert!((&d.reconstruct() - &l).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn sampling_examples() {
        let single = BlockDecomposition::from_operator(&Op::identity(3), &tol()).unwrap();
        let u = random_commutant_unitary(&single, 5);
        assert_eq!(u.dim(), 3);
        assert!(u.unitarity_residual() < 1e-12);

        let diag = Op::from_diagonal(&[1.0, 2.0, 3.0]);
        let d = BlockDecomposition::from_operator(&diag, &tol()).unwrap();
        let u = random_commutant_unitary(&d, 5);
        for i in 0..3 {
            assert!((u[(i, i)].norm() - 1.0).abs() < 1e-14);
            for j in 0..3 {
                if i != j {
                    assert!(u[(i, j)].norm() < 1e-15);
                }
            }
        }

        let l = Op::from_diagonal(&[1.0, 1.0, 2.0, 2.0]);
        let d = BlockDecomposition::from_operator(&l, &tol()).unwrap();
        let u = random_commutant_unitary(&d, 11);
        assert!(commutator(&u, &l).unwrap().frobenius_norm() <= 1e-10);
        assert_eq!(u, random_commutant_unitary(&d, 11));
    }

    #[test]
    fn projection_examples() {
        let l = Op::from_diagonal(&[1.0, 1.0, 2.0, 2.0]);
        let d = BlockDecomposition::from_operator(&l, &tol()).unwrap();
        let mut rng = seeded_rng(1, 0);

        let inside = &d.generators()[3].scale_real(0.7) + &d.generators()[5].scale_real(-0.2);
        assert!((&project_generator(&inside, &d, &tol()).unwrap() - &inside).frobenius_norm() < 1e-12);

        let mut cross = Op::zeros(4);
        cross[(0, 2)] = c(0.3, 0.1);
        cross[(2, 0)] = c(-0.3, 0.1);
        assert!(project_generator(&cross, &d, &tol()).unwrap().frobenius_norm() < 1e-15);

        let k = random_hermitian::<f64>(4, &mut rng).scale(c(0.0, 1.0));
        let p = project_generator(&k, &d, &tol()).unwrap();
        assert!(p.anti_hermiticity_residual() < 1e-14);
        let u = anti_hermitian_exp(&p, &tol()).unwrap();
        assert!(commutator(&u, &l).unwrap().frobenius_norm() <= 1e-10);
    }

    #[test]
    fn projection_rejects_hermitian() {
        let d = BlockDecomposition::from_operator(&Op::identity(2), &tol()).unwrap();
        assert!(matches!(project_generator(&Op::pauli_x(), &d, &tol()), Err(Error::NotAntiHermitian { .. })));
    }

    #[test]
    fn generators_are_orthonormal_anti_hermitian() {
        let d = BlockDecomposition::from_operator(&Op::from_diagonal(&[1.0, 1.0, 3.0]), &tol()).unwrap();
        let gens = d.generators();
        assert_eq!(gens.len(), 5);
        for (a, ga) in gens.iter().enumerate() {
            assert!(ga.anti_hermiticity_residual() < 1e-14);
            for (b, gb) in gens.iter().enumerate() {
                let ip = (&ga.adjoint() * gb).trace();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - re(expected)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn restore_is_identity_on_commutant() {
        let l = Op::from_diagonal(&[1.0, 1.0, 2.0, 2.0]);
        let d = BlockDecomposition::from_operator(&l, &tol()).unwrap();
        let u = random_commutant_unitary(&d, 2);
        assert!((&d.restore(&u) - &u).frobenius_norm() < 1e-13);
    }
}
