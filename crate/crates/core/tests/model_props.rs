use num_complex::Complex64;
use proptest::prelude::*;
use wayaudit_core::linalg::{haar_state_with, haar_unitary_with};
use wayaudit_core::random::{random_positive_operator, seeded_rng};
use wayaudit_core::way::{gram_rank, random_exact_commuting_model};
use wayaudit_core::{
    check_conserved, check_nondestructive, conserved_eigenspaces, counterexample_sweep, joint_blocks,
    matrix_element_identity, random_commutant_unitary, synthesize_unitary, tensor_product, Conserved64, Model64,
    Operator64, StateVector64, Tolerances64,
};

fn dims() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((2, 2)), Just((2, 3)), Just((3, 3)), Just((3, 5))]
}

fn random_model(n1: usize, n2: usize, seed: u64) -> Model64 {
    let mut rng = seeded_rng(seed, 0);
    let basis_u: Operator64 = haar_unitary_with(n1, &mut rng);
    let basis = (0..n1).map(|j| StateVector64::normalized(basis_u.column(j)).unwrap()).collect();
    let ready = haar_state_with(n2, &mut rng);
    Model64::new(basis, ready, haar_unitary_with(n1 * n2, &mut rng), &Tolerances64::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blocks_conserve_column_weight((n1, n2) in dims(), seed in any::<u64>()) {
        let blocks = joint_blocks(&random_model(n1, n2, seed));
        for w in blocks.column_weights() {
            prop_assert!((w - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn synthesis_recovers_pointers((n1, n2) in dims(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed, 1);
        let basis = StateVector64::computational_basis(n1);
        let ready = haar_state_with(n2, &mut rng);
        let pointers: Vec<StateVector64> = (0..n1).map(|_| haar_state_with(n2, &mut rng)).collect();
        let m = synthesize_unitary(&basis, &ready, &pointers).unwrap();
        let nd = check_nondestructive(&m, 1e-10);
        prop_assert!(nd.leakage <= 1e-10);
        let family = nd.pointer_family().unwrap();
        for (given, found) in pointers.iter().zip(&family.pointers) {
            prop_assert!((given.inner(found).unwrap().norm() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn conservation_residual_ignores_phase_and_basis((n1, n2) in dims(), seed in any::<u64>(), phase in 0.0..std::f64::consts::TAU) {
        let mut rng = seeded_rng(seed, 2);
        let la = random_positive_operator(n1, &mut rng);
        let lb = random_positive_operator(n2, &mut rng);
        let q = Conserved64::multiplicative(la.clone(), lb.clone()).unwrap();
        let u = haar_unitary_with(n1 * n2, &mut rng);
        let m = Model64::computational(n1, haar_state_with(n2, &mut rng), u.clone()).unwrap();
        let base = check_conserved(&m, &q, 1e-9).unwrap().residual;

        // quarter-turn phases are exact in floating point, so the residual must be too
        for z in [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)] {
            let phased = m.with_interaction(u.scale(z), &Tolerances64::default()).unwrap();
            prop_assert_eq!(check_conserved(&phased, &q, 1e-9).unwrap().residual, base);
        }
        let phased = m.with_interaction(u.scale(Complex64::from_polar(1.0, phase)), &Tolerances64::default()).unwrap();
        let r = check_conserved(&phased, &q, 1e-9).unwrap().residual;
        prop_assert!((r - base).abs() <= 1e-13 * (1.0 + base));

        let (wa, wb): (Operator64, Operator64) = (haar_unitary_with(n1, &mut rng), haar_unitary_with(n2, &mut rng));
        let w = tensor_product(&wa, &wb);
        let rotated_u = &(&w * &u) * &w.adjoint();
        let rotated_q = Conserved64::multiplicative(
            &(&wa * &la) * &wa.adjoint(),
            &(&wb * &lb) * &wb.adjoint(),
        ).unwrap();
        let rotated = m.with_interaction(rotated_u, &Tolerances64::default()).unwrap();
        let r = check_conserved(&rotated, &rotated_q, 1e-9).unwrap().residual;
        prop_assert!((r - base).abs() <= 1e-10 * (1.0 + base));
    }

    #[test]
    fn exact_commuting_models_satisfy_the_identity((n1, n2) in dims(), seed in any::<u64>()) {
        let (m, q) = random_exact_commuting_model::<f64>(n1, n2, &mut seeded_rng(seed, 3)).unwrap();
        prop_assert!(matrix_element_identity(&m, &q, 1e-9).unwrap().max_abs <= 1e-8);
    }

    #[test]
    fn constant_gram_has_rank_at_most_one(n in 1usize..5, re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let r = gram_rank(vec![vec![Complex64::new(re, im); n]; n], 1e-9);
        prop_assert!(r.constant_case && r.rank <= 1 && r.rank_consistent);
    }

    #[test]
    fn commutant_samples_commute((n1, n2) in dims(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed, 4);
        let q = Conserved64::multiplicative(random_positive_operator(n1, &mut rng), random_positive_operator(n2, &mut rng)).unwrap();
        let d = conserved_eigenspaces(&q, &Tolerances64::default()).unwrap();
        let l = q.joint_operator();
        prop_assert!((&d.reconstruct() - &l).frobenius_norm() <= 1e-9 * (1.0 + l.frobenius_norm()));
        let u = random_commutant_unitary(&d, seed);
        prop_assert!(wayaudit_core::commutator(&u, &l).unwrap().frobenius_norm() <= 1e-9);
    }
}

#[test]
fn counterexample_sweep_is_reproducible() {
    for (n1, n2) in [(2, 3), (3, 3)] {
        let a = counterexample_sweep::<f64>(n1, n2, 60, 12, 1e-9).unwrap();
        let b = counterexample_sweep::<f64>(n1, n2, 60, 12, 1e-9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.contradictions, 0);
    }
}
