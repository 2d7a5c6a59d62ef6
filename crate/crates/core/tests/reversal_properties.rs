use proptest::prelude::*;
use qreverse::info::{entropy_exchange, w_matrix};
use qreverse::linalg::{shannon_entropy, von_neumann_entropy, ComplexMatrix, ToleranceConfig, C64};
use qreverse::operations::{DensityOperator, QuantumOperation};
use qreverse::random::{
    ginibre, random_code_state, random_operation, random_reversible_instance, random_unitary,
    ReversibleInstance,
};
use qreverse::reversibility::{
    adjoint_condition_check, algebraic_m_matrix, algebraic_reversibility, construct_reversal,
    info_theoretic_reversibility, verify_reversal, CodeSubspace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn instance(rng: &mut ChaCha8Rng) -> ReversibleInstance {
    let (dim, code_dim) = [(4, 1), (4, 2), (8, 1), (8, 2)][rng.random_range(0..4)];
    let max_n = (dim / code_dim).min(4);
    let n = rng.random_range(2..=max_n);
    random_reversible_instance(rng, dim, code_dim, n).unwrap()
}

fn random_code(rng: &mut ChaCha8Rng, dim: usize, code_dim: usize) -> CodeSubspace {
    let q = random_unitary(rng, dim);
    CodeSubspace::new((0..code_dim).map(|k| q.column_block(k, 1)).collect(), &tol()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn routes_agree_and_reversal_verifies(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = instance(&mut rng);
        let info = info_theoretic_reversibility(&inst.operation, &inst.code, &tol()).unwrap();
        let alg = algebraic_reversibility(&inst.operation, &inst.code, &tol()).unwrap();
        prop_assert!(info.reversible && alg.reversible);
        let r = construct_reversal(&inst.operation, &inst.code, &tol()).unwrap();
        let check = verify_reversal(&r.reversal, &inst.operation, &inst.code, &tol()).unwrap();
        prop_assert!(check.ok && check.worst_residual < 1e-9);
        prop_assert!((check.mu_squared - inst.mu_squared).abs() < 1e-9);
        prop_assert!((r.mu_squared - inst.mu_squared).abs() < 1e-9);
        let mut expected = inst.weights.clone();
        expected.sort_by(|a, b| b.total_cmp(a));
        for (got, want) in r.weights.iter().zip(&expected) {
            prop_assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn routes_agree_on_generic_operations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = random_code(&mut rng, 4, 2);
        let deterministic: bool = rng.random();
        let e = random_operation(&mut rng, 4, 2, deterministic);
        let info = info_theoretic_reversibility(&e, &code, &tol()).unwrap();
        let alg = algebraic_reversibility(&e, &code, &tol()).unwrap();
        prop_assert_eq!(info.reversible, alg.reversible);
    }

    #[test]
    fn reversal_is_unique_on_syndrome_space(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = instance(&mut rng);
        let r = construct_reversal(&inst.operation, &inst.code, &tol()).unwrap();
        let syndrome_ops = r.syndrome_operators();
        let u = random_unitary(&mut rng, syndrome_ops.len() + 1);
        let mut t_ops = QuantumOperation::new(syndrome_ops, &tol()).unwrap().remix(&u, &tol()).unwrap().kraus().to_vec();
        let complement = r.complement_projector();
        if complement.trace().re > 0.5 {
            let w = random_unitary(&mut rng, complement.rows());
            t_ops.push(&w * &complement);
        }
        let t = QuantumOperation::new(t_ops, &tol()).unwrap();
        prop_assert!(t.is_deterministic(&tol()));
        let check = verify_reversal(&t, &inst.operation, &inst.code, &tol()).unwrap();
        prop_assert!(check.ok);
        prop_assert!((check.mu_squared - r.mu_squared).abs() < 1e-9);
        let t_n = t.as_map().right_multiply(&r.n_projector).choi();
        let r_n = r.reversal.as_map().right_multiply(&r.n_projector).choi();
        prop_assert!(t_n.relative_distance(&r_n) < 1e-9);
    }

    #[test]
    fn canonical_operators_diagonalize_every_code_state(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = instance(&mut rng);
        let r = construct_reversal(&inst.operation, &inst.code, &tol()).unwrap();
        let canonical = QuantumOperation::new(r.canonical_operators.clone(), &tol()).unwrap();
        for _ in 0..3 {
            let rho = random_code_state(&mut rng, &inst.code);
            let w = w_matrix(&canonical, &rho, &tol()).unwrap();
            prop_assert!(w.matrix.distance(&ComplexMatrix::diagonal(&r.lambdas)) < 1e-9);
        }
    }

    #[test]
    fn reversal_entropy_bookkeeping(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = instance(&mut rng);
        let r = construct_reversal(&inst.operation, &inst.code, &tol()).unwrap();
        let rho = random_code_state(&mut rng, &inst.code);
        let (rho_prime, trace) = inst.operation.apply_normalized(&rho, &tol()).unwrap();
        prop_assert!((trace - r.mu_squared).abs() < 1e-9);
        let lambdas: Vec<f64> = r.lambdas.iter().copied().filter(|&l| l > 0.0).collect();
        let h = shannon_entropy(&lambdas, &tol()).unwrap();
        let se_forward = entropy_exchange(&inst.operation, &rho, &tol()).unwrap();
        let se_reverse = entropy_exchange(&r.reversal, &rho_prime, &tol()).unwrap();
        prop_assert!((se_forward - h).abs() < 1e-9);
        prop_assert!((se_reverse - h).abs() < 1e-9);
        let restored = r.reversal.apply(&rho_prime, &tol()).unwrap();
        let reduction = von_neumann_entropy(rho_prime.matrix(), &tol()).unwrap()
            - von_neumann_entropy(restored.matrix(), &tol()).unwrap();
        prop_assert!((se_reverse - reduction).abs() < 1e-9);
    }

    #[test]
    fn m_matrix_is_covariant_under_remix(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = instance(&mut rng);
        let (m, _) = algebraic_m_matrix(&inst.operation, &inst.code, &tol()).unwrap();
        let u = random_unitary(&mut rng, inst.operation.len());
        let f = inst.operation.remix(&u, &tol()).unwrap();
        let (m2, holds) = algebraic_m_matrix(&f, &inst.code, &tol()).unwrap();
        prop_assert!(holds);
        let umu = &(&u * &m.matrix) * &u.dagger();
        prop_assert!(m2.matrix.distance(&umu) < 1e-9);
        prop_assert!((m2.mu_squared - m.mu_squared).abs() < 1e-9);
    }

    #[test]
    fn restricted_operation_preserves_inner_products(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = instance(&mut rng);
        let adj = adjoint_condition_check(&inst.operation, &inst.code, &tol()).unwrap();
        prop_assert!(adj.holds);
        prop_assert!((adj.gamma_squared - adj.gamma_squared_from_m.unwrap()).abs() < 1e-9);
        let dim = inst.code.dim();
        let p = inst.code.projector();
        let map = inst.operation.as_map();
        for _ in 0..3 {
            let n = &(p * &ginibre(&mut rng, dim, dim)) * p;
            let o = &(p * &ginibre(&mut rng, dim, dim)) * p;
            let lhs: C64 = map.apply_operator(&n).hs_inner(&map.apply_operator(&o));
            let rhs = n.hs_inner(&o) * adj.gamma_squared;
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn reversed_state_is_recovered(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = instance(&mut rng);
        let r = construct_reversal(&inst.operation, &inst.code, &tol()).unwrap();
        let rho = random_code_state(&mut rng, &inst.code);
        let (out, _) = inst.operation.apply_normalized(&rho, &tol()).unwrap();
        let back: DensityOperator = r.reversal.apply(&out, &tol()).unwrap();
        prop_assert!(back.matrix().distance(rho.matrix()) < 1e-9);
    }
}
