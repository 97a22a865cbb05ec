mod common;

use common::*;
use eqnn::equiv::{
    count_parameters_channel, solve_choi_method, solve_nullspace, solve_twirl, twirl, verify_equivariance,
    EquivarianceProblem, ProblemSpec, TwirlConfig,
};
use eqnn::group::{commutant_basis, cyclic_shift_rep, isotypic_decompose, su2_defining, su2_tensor, symmetric_qubit_rep};
use eqnn::Exec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn problem(json: &str) -> EquivarianceProblem {
    ProblemSpec::from_json(json).unwrap().build().unwrap()
}

fn z2() -> EquivarianceProblem {
    problem(include_str!("../../cli/presets/z2-fig4.json"))
}

fn z2xz2() -> EquivarianceProblem {
    problem(include_str!("../../cli/presets/z2xz2-pool.json"))
}

#[test]
fn three_methods_span_the_same_space() {
    let cases = [
        z2(),
        z2xz2(),
        EquivarianceProblem::new(su2_tensor(2), su2_defining()).unwrap(),
        EquivarianceProblem::new(su2_defining(), su2_tensor(2)).unwrap(),
        EquivarianceProblem::new(cyclic_shift_rep(2), cyclic_shift_rep(2)).unwrap(),
    ];
    for p in &cases {
        let null = solve_nullspace(p).unwrap();
        let choi = solve_choi_method(p, 5).unwrap();
        let tw = solve_twirl(p, Exec::default()).unwrap();
        assert_eq!(null.len(), choi.len());
        assert_eq!(null.len(), tw.len());
        assert!(null.projector_distance(&choi) < 1e-8);
        assert!(null.projector_distance(&tw) < 1e-8);
        assert!(null.residuals.iter().all(|&r| r < 1e-9));
    }
}

#[test]
fn commutant_dimension_is_sum_of_squared_multiplicities() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for rep in [su2_tensor(2), su2_tensor(3), symmetric_qubit_rep(3), cyclic_shift_rep(3), cyclic_shift_rep(4)] {
        let m2 = isotypic_decompose(&rep, 4, 2).unwrap().sum_m2();
        assert_eq!(m2, commutant_basis(&rep, None).unwrap().len());
        assert_eq!(m2, commutant_dim_oracle(&rep_samples(&rep, &mut rng)));
    }
}

#[test]
fn channel_counts_match_brute_force_without_symmetry() {
    let t = eqnn::group::trivial_rep(&eqnn::group::trivial_group(), 2);
    let c = count_parameters_channel(&t, &t).unwrap();
    assert_eq!(c.net, brute_force_net(2, 2));
    let t4 = eqnn::group::trivial_rep(&eqnn::group::trivial_group(), 4);
    assert_eq!(count_parameters_channel(&t4, &t).unwrap().net, brute_force_net(4, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_twirl_is_an_equivariant_projection(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in [z2(), z2xz2()] {
            let phi = random_transfer(p.in_dim(), p.out_dim(), &mut rng);
            let once = twirl(&phi, &p, &TwirlConfig::exact()).unwrap().transfer;
            let twice = twirl(&once, &p, &TwirlConfig::exact()).unwrap().transfer;
            prop_assert!((&twice.matrix - &once.matrix).norm() < 1e-10);
            prop_assert!(verify_equivariance(&once, &p, 8, seed).unwrap() < 1e-10);
            // orthogonality of the projection: φ − T[φ] ⟂ T[φ]
            let inner: f64 = (&phi.matrix - &once.matrix).iter().zip(once.matrix.iter()).map(|(a, b)| (a.conj() * b).re).sum();
            prop_assert!(inner.abs() < 1e-10);
        }
    }

    #[test]
    fn weingarten_matches_nullspace_projection(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = EquivarianceProblem::new(su2_tensor(2), su2_defining()).unwrap();
        let phi = random_transfer(4, 2, &mut rng);
        let w = twirl(&phi, &p, &TwirlConfig::weingarten()).unwrap().transfer;
        prop_assert!(verify_equivariance(&w, &p, 8, seed).unwrap() < 1e-10);
        let basis = solve_nullspace(&p).unwrap();
        // the residual after removing the span component vanishes
        let span = eqnn::linalg::real_orthonormal_span(&basis.span_matrix(), 1e-9);
        let v = nalgebra::DVector::from_iterator(span.nrows(), w.matrix.iter().map(|z| z.re));
        let proj = &span * (span.transpose() * &v);
        prop_assert!((proj - v).norm() < 1e-10);
    }
}

#[test]
fn mc_twirl_error_is_reported() {
    let p = EquivarianceProblem::new(su2_defining(), su2_defining()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let phi = random_transfer(2, 2, &mut rng);
    let r = twirl(&phi, &p, &TwirlConfig::haar(400, 1)).unwrap();
    let exact = twirl(&phi, &p, &TwirlConfig::weingarten()).unwrap().transfer;
    let err = (&r.transfer.matrix - &exact.matrix).norm();
    let se = r.std_error.unwrap();
    assert!(err < 5.0 * se, "error {err} vs standard error {se}");
}

#[test]
fn sequential_and_parallel_twirls_agree() {
    let p = EquivarianceProblem::new(su2_tensor(2), su2_defining()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let phi = random_transfer(4, 2, &mut rng);
    let a = twirl(&phi, &p, &TwirlConfig::haar(200, 3).with_exec(Exec::Sequential)).unwrap();
    let b = twirl(&phi, &p, &TwirlConfig::haar(200, 3).with_exec(Exec::Parallel)).unwrap();
    assert!((&a.transfer.matrix - &b.transfer.matrix).norm() < 1e-12);
}

#[test]
fn unitary_tensor_power_commutants_follow_schur_weyl() {
    // dimension of the commutant of U(2)^{⊗n} is the Catalan number C_n
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (n, catalan) in [(2, 2), (3, 5), (4, 14)] {
        let rep = eqnn::group::tensor_rep(&eqnn::group::unitary_defining(2), n);
        assert_eq!(commutant_basis(&rep, None).unwrap().len(), catalan);
        assert_eq!(isotypic_decompose(&rep, 4, 3).unwrap().sum_m2(), catalan);
        assert_eq!(commutant_dim_oracle(&rep_samples(&rep, &mut rng)), catalan);
    }
}
