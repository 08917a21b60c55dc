//! Measurement models: a system basis, an apparatus ready state and a joint
//! interaction unitary, plus the checks the no-go theorem is phrased in.
//!
//! The scheme is `Û(u(j)⊗v) = u(j)⊗v(j)` for an exact nondestructive
//! measurement. For an arbitrary `Û` the image of `u(j)⊗v` is decomposed as
//! `Σᵢ u(i)⊗w(i,j)`; the off-diagonal blocks measure how far the system is
//! disturbed and the diagonal blocks define the pointer states.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{
    inner_raw, kron_raw, norm_raw, orthonormality_residual, tensor_product, unitary_completion_raw, Operator,
    StateVector, ToleranceConfig, NORM_TOL, ORTHONORMAL_INPUT_TOL,
};
use crate::scalar::{re, Real};

impl<T: Real> AsRef<[Complex<T>]> for StateVector<T> {
    fn as_ref(&self) -> &[Complex<T>] {
        self.amplitudes()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConservationKind {
    /// `L^A⊗1 + 1⊗L^B`
    Additive,
    /// `L^A⊗L^B`
    Multiplicative,
}

impl ConservationKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Additive => "additive",
            Self::Multiplicative => "multiplicative",
        }
    }
}

/// A conserved quantity built from a system part `la` and an apparatus part `lb`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedQuantity<T: Real = f64> {
    pub kind: ConservationKind,
    pub la: Operator<T>,
    pub lb: Operator<T>,
}

impl<T: Real> ConservedQuantity<T> {
    pub fn new(kind: ConservationKind, la: Operator<T>, lb: Operator<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        for op in [&la, &lb] {
            let residual = op.hermiticity_residual();
            if residual > tol.hermiticity {
                return Err(Error::NotHermitian { residual: residual.as_f64() });
            }
        }
        Ok(Self { kind, la, lb })
    }

    pub fn multiplicative(la: Operator<T>, lb: Operator<T>) -> Result<Self> {
        Self::new(ConservationKind::Multiplicative, la, lb, &ToleranceConfig::default())
    }

    pub fn additive(la: Operator<T>, lb: Operator<T>) -> Result<Self> {
        Self::new(ConservationKind::Additive, la, lb, &ToleranceConfig::default())
    }

    /// The joint operator `L` on the system ⊗ apparatus space.
    pub fn joint_operator(&self) -> Operator<T> {
        match self.kind {
            ConservationKind::Multiplicative => tensor_product(&self.la, &self.lb),
            ConservationKind::Additive => {
                let a = tensor_product(&self.la, &Operator::identity(self.lb.dim()));
                let b = tensor_product(&Operator::identity(self.la.dim()), &self.lb);
                &a + &b
            }
        }
    }
}

/// System basis `u(i)`, ready state `v` and interaction `Û`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementModel<T: Real = f64> {
    n1: usize,
    n2: usize,
    system_basis: Vec<StateVector<T>>,
    ready_state: StateVector<T>,
    interaction: Operator<T>,
}

impl<T: Real> MeasurementModel<T> {
    pub fn new(
        system_basis: Vec<StateVector<T>>,
        ready_state: StateVector<T>,
        interaction: Operator<T>,
        tol: &ToleranceConfig<T>,
    ) -> Result<Self> {
        let n1 = system_basis.len();
        let n2 = ready_state.dim();
        if n1 == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(bad) = system_basis.iter().find(|u| u.dim() != n1) {
            return Err(Error::DimensionMismatch { op: "system_basis", left: n1, right: bad.dim() });
        }
        let refs: Vec<&[Complex<T>]> = system_basis.iter().map(|u| u.amplitudes()).collect();
        let residual = orthonormality_residual(&refs);
        if residual > T::lit(ORTHONORMAL_INPUT_TOL) {
            return Err(Error::NotOrthonormal { residual: residual.as_f64() });
        }
        if interaction.dim() != n1 * n2 {
            return Err(Error::DimensionMismatch { op: "interaction", left: n1 * n2, right: interaction.dim() });
        }
        let residual = interaction.unitarity_residual();
        if residual > tol.unitarity {
            return Err(Error::NotUnitary { residual: residual.as_f64() });
        }
        Ok(Self { n1, n2, system_basis, ready_state, interaction })
    }

    /// Model whose system basis is the computational basis of dimension `n1`.
    pub fn computational(n1: usize, ready_state: StateVector<T>, interaction: Operator<T>) -> Result<Self> {
        Self::new(StateVector::computational_basis(n1), ready_state, interaction, &ToleranceConfig::default())
    }

    /// The two-qubit CNOT scheme: computational basis, `v = |0⟩`, `Û = CNOT`.
    pub fn cnot() -> Self {
        Self::computational(2, StateVector::basis(2, 0).expect("static"), Operator::cnot()).expect("CNOT is unitary")
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn system_basis(&self) -> &[StateVector<T>] {
        &self.system_basis
    }

    pub fn ready_state(&self) -> &StateVector<T> {
        &self.ready_state
    }

    pub fn interaction(&self) -> &Operator<T> {
        &self.interaction
    }

    /// Same basis and ready state with a different interaction.
    pub fn with_interaction(&self, interaction: Operator<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        Self::new(self.system_basis.clone(), self.ready_state.clone(), interaction, tol)
    }

    /// `Σᵢ λᵢ |u(i)⟩⟨u(i)|` with `λᵢ = i + 1`.
    pub fn observable(&self) -> Operator<T> {
        let eigenvalues: Vec<T> = (0..self.n1).map(|i| T::lit((i + 1) as f64)).collect();
        self.observable_with(&eigenvalues)
    }

    pub fn observable_with(&self, eigenvalues: &[T]) -> Operator<T> {
        let mut out = Operator::zeros(self.n1);
        for (u, &lambda) in self.system_basis.iter().zip(eigenvalues) {
            let proj = Operator::outer(u, u).expect("same dimension");
            out = &out + &proj.scale_real(lambda);
        }
        out
    }

    /// Joint state `ψ⊗v`.
    pub fn joint_state(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        if psi.dim() != self.n1 {
            return Err(Error::DimensionMismatch { op: "joint_state", left: self.n1, right: psi.dim() });
        }
        Ok(psi.tensor(&self.ready_state))
    }
}

/// Grid of apparatus vectors `w(i,j) = (⟨u(i)|⊗1)·Û·(|u(j)⟩⊗|v⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointBlocks<T: Real = f64> {
    n1: usize,
    blocks: Vec<Vec<Complex<T>>>,
}

impl<T: Real> JointBlocks<T> {
    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn block(&self, i: usize, j: usize) -> &[Complex<T>] {
        &self.blocks[i * self.n1 + j]
    }

    pub fn norm(&self, i: usize, j: usize) -> T {
        norm_raw(self.block(i, j))
    }

    /// `Σᵢ ‖w(i,j)‖²` for each column `j`; equal to 1 for a unitary `Û`.
    pub fn column_weights(&self) -> Vec<T> {
        (0..self.n1).map(|j| (0..self.n1).map(|i| self.norm(i, j).powi(2)).sum()).collect()
    }

    /// `maxᵢ≠ⱼ ‖w(i,j)‖`.
    pub fn leakage(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n1 {
            for j in 0..self.n1 {
                if i != j {
                    worst = worst.max(self.norm(i, j));
                }
            }
        }
        worst
    }
}

pub fn joint_blocks<T: Real>(m: &MeasurementModel<T>) -> JointBlocks<T> {
    joint_blocks_for(m, &m.interaction)
}

/// Block decomposition of an arbitrary joint unitary against the model's basis
/// and ready state; the optimizer evaluates candidates through this.
pub(crate) fn joint_blocks_for<T: Real>(m: &MeasurementModel<T>, u: &Operator<T>) -> JointBlocks<T> {
    joint_blocks_raw(&m.system_basis, m.ready_state.amplitudes(), u)
}

pub(crate) fn joint_blocks_raw<T: Real>(
    basis: &[StateVector<T>],
    ready: &[Complex<T>],
    u: &Operator<T>,
) -> JointBlocks<T> {
    let n1 = basis.len();
    let n2 = ready.len();
    let mut blocks = vec![Vec::new(); n1 * n1];
    for (j, uj) in basis.iter().enumerate() {
        let image = u.apply_raw(&kron_raw(uj.amplitudes(), ready));
        for (i, ui) in basis.iter().enumerate() {
            let w: Vec<Complex<T>> = (0..n2)
                .map(|b| {
                    ui.amplitudes()
                        .iter()
                        .enumerate()
                        .fold(re(T::zero()), |acc, (a, ua)| acc + ua.conj() * image[a * n2 + b])
                })
                .collect();
            blocks[i * n1 + j] = w;
        }
    }
    JointBlocks { n1, blocks }
}

/// Normalized pointer states `v(j)` together with the leakage they were
/// extracted at.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerFamily<T: Real = f64> {
    pub pointers: Vec<StateVector<T>>,
    pub leakage: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NondestructiveReport<T: Real = f64> {
    pub leakage: T,
    pub verdict: bool,
    /// `None` when some pointer is degenerate; see `degenerate`.
    pub pointers: Option<PointerFamily<T>>,
    /// `(j, ‖w(j,j)‖)` for every pointer too small to normalize.
    pub degenerate: Vec<(usize, T)>,
}

impl<T: Real> NondestructiveReport<T> {
    /// The pointer family, or the first degenerate pointer as an error.
    pub fn pointer_family(&self) -> Result<&PointerFamily<T>> {
        match (&self.pointers, self.degenerate.first()) {
            (Some(p), _) => Ok(p),
            (None, Some(&(index, norm))) => Err(Error::DegeneratePointer { index, norm: norm.as_f64() }),
            (None, None) => unreachable!("pointers are missing only when one is degenerate"),
        }
    }
}

pub fn check_nondestructive<T: Real>(m: &MeasurementModel<T>, tol: T) -> NondestructiveReport<T> {
    nondestructive_from_blocks(&joint_blocks(m), tol)
}

pub(crate) fn nondestructive_from_blocks<T: Real>(blocks: &JointBlocks<T>, tol: T) -> NondestructiveReport<T> {
    let leakage = blocks.leakage();
    let mut pointers = Vec::with_capacity(blocks.n1);
    let mut degenerate = Vec::new();
    for j in 0..blocks.n1 {
        let norm = blocks.norm(j, j);
        if norm > tol {
            pointers.push(StateVector::normalized(blocks.block(j, j).to_vec()).expect("nonzero block"));
        } else {
            degenerate.push((j, norm));
        }
    }
    let pointers = degenerate.is_empty().then_some(PointerFamily { pointers, leakage });
    NondestructiveReport { leakage, verdict: leakage <= tol, pointers, degenerate }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactnessReport<T: Real = f64> {
    /// `gram[i][j] = ⟨v(i)|v(j)⟩`
    pub gram: Vec<Vec<Complex<T>>>,
    /// `‖gram − I‖_F`
    pub deficit: T,
    pub verdict: bool,
}

/// Pointer orthogonality. Only requires the pointers to be well defined; the
/// leakage is not re-checked here.
pub fn check_exact<T: Real>(m: &MeasurementModel<T>, tol: T) -> Result<ExactnessReport<T>> {
    let report = check_nondestructive(m, tol);
    Ok(exactness_of(report.pointer_family()?, tol))
}

pub fn exactness_of<T: Real>(family: &PointerFamily<T>, tol: T) -> ExactnessReport<T> {
    let gram = pointer_gram(&family.pointers);
    let refs: Vec<&[Complex<T>]> = family.pointers.iter().map(|p| p.amplitudes()).collect();
    let deficit = orthonormality_residual(&refs);
    ExactnessReport { gram, deficit, verdict: deficit <= tol }
}

pub(crate) fn pointer_gram<T: Real>(pointers: &[StateVector<T>]) -> Vec<Vec<Complex<T>>> {
    pointers.iter().map(|a| pointers.iter().map(|b| inner_raw(a.amplitudes(), b.amplitudes())).collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationReport<T> {
    /// `‖Û†LÛ − L‖_F`
    pub residual: T,
    pub verdict: bool,
}

pub fn check_conserved<T: Real>(
    m: &MeasurementModel<T>,
    q: &ConservedQuantity<T>,
    tol: T,
) -> Result<ConservationReport<T>> {
    conservation_residual(&m.interaction, q, m.n1, m.n2)
        .map(|residual| ConservationReport { residual, verdict: residual <= tol })
}

pub(crate) fn conservation_residual<T: Real>(
    u: &Operator<T>,
    q: &ConservedQuantity<T>,
    n1: usize,
    n2: usize,
) -> Result<T> {
    if q.la.dim() != n1 {
        return Err(Error::DimensionMismatch { op: "conserved LA", left: n1, right: q.la.dim() });
    }
    if q.lb.dim() != n2 {
        return Err(Error::DimensionMismatch { op: "conserved LB", left: n2, right: q.lb.dim() });
    }
    let l = q.joint_operator();
    Ok((&l.conjugate_by(u)? - &l).frobenius_norm())
}

/// Builds the nondestructive scheme `Û(u(j)⊗v) = u(j)⊗v(j)`.
///
/// Both the input family `{u(j)⊗v}` and the output family `{u(j)⊗v(j)}` are
/// completed to unitaries `A`, `B` and `Û = B·A†`.
pub fn synthesize_unitary<T: Real, P: AsRef<[Complex<T>]>>(
    system_basis: &[StateVector<T>],
    ready_state: &StateVector<T>,
    pointers: &[P],
) -> Result<MeasurementModel<T>> {
    let n1 = system_basis.len();
    let n2 = ready_state.dim();
    if pointers.len() != n1 {
        return Err(Error::Shape { what: "pointers", expected: n1, found: pointers.len() });
    }
    for p in pointers {
        let p = p.as_ref();
        if p.len() != n2 {
            return Err(Error::DimensionMismatch { op: "pointer", left: n2, right: p.len() });
        }
        let norm = norm_raw(p);
        if (norm - T::one()).abs() > T::lit(NORM_TOL) {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
    }
    let refs: Vec<&[Complex<T>]> = system_basis.iter().map(|u| u.amplitudes()).collect();
    let residual = orthonormality_residual(&refs);
    if residual > T::lit(ORTHONORMAL_INPUT_TOL) {
        return Err(Error::NotOrthonormal { residual: residual.as_f64() });
    }

    let d = n1 * n2;
    let inputs: Vec<Vec<Complex<T>>> =
        system_basis.iter().map(|u| kron_raw(u.amplitudes(), ready_state.amplitudes())).collect();
    let outputs: Vec<Vec<Complex<T>>> =
        system_basis.iter().zip(pointers).map(|(u, p)| kron_raw(u.amplitudes(), p.as_ref())).collect();
    let a = unitary_completion_raw(inputs, d)?;
    let b = unitary_completion_raw(outputs, d)?;
    let u = b.try_mul(&a.adjoint())?;
    MeasurementModel::new(system_basis.to_vec(), ready_state.clone(), u, &ToleranceConfig::default())
}
