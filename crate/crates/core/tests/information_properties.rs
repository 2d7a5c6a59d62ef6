use proptest::prelude::*;
use qreverse::info::{
    canonical_decomposition, data_processing_check, entanglement_fidelity, entropy_exchange, fano_check,
    rq_output_state, shannon_bound_check, subadditivity_report, w_matrix,
};
use qreverse::linalg::{operator_span_dim, von_neumann_entropy, ToleranceConfig};
use qreverse::operations::{DensityOperator, QuantumOperation};
use qreverse::random::{random_density, random_density_of_rank, random_operation, random_unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn instance(seed: u64) -> (ChaCha8Rng, QuantumOperation, DensityOperator) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.random_range(2..5);
    let n = rng.random_range(1..5);
    let deterministic: bool = rng.random();
    let e = random_operation(&mut rng, dim, n, deterministic);
    let rank = rng.random_range(1..=dim);
    let rho = random_density_of_rank(&mut rng, dim, rank);
    (rng, e, rho)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_paths_to_entropy_exchange(seed in any::<u64>()) {
        let (_, e, rho) = instance(seed);
        let s_w = entropy_exchange(&e, &rho, &tol()).unwrap();
        let joint = rq_output_state(&e, &rho, &tol()).unwrap();
        let s_rq = von_neumann_entropy(&joint.matrix, &tol()).unwrap();
        prop_assert!((s_w - s_rq).abs() < 1e-9);
    }

    #[test]
    fn measures_are_remix_invariant(seed in any::<u64>()) {
        let (mut rng, e, rho) = instance(seed);
        let u = random_unitary(&mut rng, e.len() + 1);
        let f = e.remix(&u, &tol()).unwrap();
        let fe = entanglement_fidelity(&e, &rho, &tol()).unwrap();
        prop_assert!(fe <= 1.0 + 1e-9);
        prop_assert!((fe - entanglement_fidelity(&f, &rho, &tol()).unwrap()).abs() < 1e-9);
        let se = entropy_exchange(&e, &rho, &tol()).unwrap();
        prop_assert!((se - entropy_exchange(&f, &rho, &tol()).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn inequalities_hold(seed in any::<u64>()) {
        let (mut rng, e, rho) = instance(seed);
        prop_assert!(fano_check(&e, &rho, &tol()).unwrap().check.holds);
        prop_assert!(subadditivity_report(&e, &rho, &tol()).unwrap().all_hold());
        let shannon = shannon_bound_check(&e, &rho, &tol()).unwrap();
        prop_assert!(shannon.holds);
        let w = w_matrix(&e, &rho, &tol()).unwrap();
        if w.off_diagonal_norm() > 1e-3 {
            prop_assert!(!shannon.saturated);
        }
        let d = random_operation(&mut rng, e.dim(), 2, true);
        let dp = data_processing_check(&e, &d, &rho, &tol()).unwrap();
        prop_assert!(dp.left.holds && dp.right.holds);
    }

    #[test]
    fn canonical_decomposition_saturates_and_is_minimal(seed in any::<u64>()) {
        let (_, e, rho) = instance(seed);
        let c = canonical_decomposition(&e, &rho, &tol()).unwrap();
        let check = shannon_bound_check(&c.operation, &rho, &tol()).unwrap();
        prop_assert!(check.saturated);
        prop_assert!((c.entropy(&tol()) - entropy_exchange(&e, &rho, &tol()).unwrap()).abs() < 1e-9);

        let full = DensityOperator::maximally_mixed(e.dim());
        let c = canonical_decomposition(&e, &full, &tol()).unwrap();
        let nonzero: Vec<_> = c
            .operation
            .kraus()
            .iter()
            .zip(&c.eigenvalues)
            .filter(|(_, &l)| l > 1e-12)
            .map(|(a, _)| a.clone())
            .collect();
        prop_assert_eq!(operator_span_dim(&nonzero, &tol()).unwrap(), nonzero.len());
    }

    #[test]
    fn identity_has_unit_fidelity(seed in any::<u64>(), dim in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&mut rng, dim);
        let id = QuantumOperation::identity(dim);
        prop_assert!((entanglement_fidelity(&id, &rho, &tol()).unwrap() - 1.0).abs() < 1e-9);
        prop_assert!(entropy_exchange(&id, &rho, &tol()).unwrap().abs() < 1e-9);
    }
}
