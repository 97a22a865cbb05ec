mod common;

use common::*;
use eqnn::equiv::verify_equivariance;
use eqnn::linalg::partial_trace;
use eqnn::su2::{
    apply_pool, feasible_boundary_distance, feasible_contains, pool_channel, pool_problem, pool_transfer,
    project_to_feasible, PoolParams,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(r: f64) -> impl Strategy<Value = PoolParams> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| PoolParams::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_matches_choi_spectrum(p in params(2.0)) {
        let closed = feasible_contains(p);
        // skip points within rounding of the boundary
        let margin = pool_channel(p).matrix.symmetric_eigenvalues().min().abs();
        prop_assume!(margin > 1e-9);
        prop_assert_eq!(closed, choi_feasible(p, 0.0));
    }

    #[test]
    fn projection_is_feasible_idempotent_and_nearest(p in params(2.5), q in params(1.0)) {
        let proj = project_to_feasible(p).unwrap();
        prop_assert!(choi_feasible(proj, -1e-9));
        prop_assert!(project_to_feasible(proj).unwrap().distance(proj) < 1e-12);
        if feasible_contains(q) {
            prop_assert!(p.distance(proj) <= p.distance(q) + 1e-12);
        }
        if feasible_contains(p) {
            prop_assert_eq!(proj, p);
        }
    }

    #[test]
    fn pool_maps_are_trace_preserving_and_equivariant(p in params(1.0), seed in any::<u64>()) {
        let t = pool_transfer(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(4, &mut rng);
        let out = apply_pool(p, &rho);
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        prop_assert!((t.apply(&rho).unwrap() - out).norm() < 1e-12);
        prop_assert!(verify_equivariance(&t, &pool_problem(), 4, seed).unwrap() < 1e-10);
    }
}

#[test]
fn projection_agrees_with_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut n = 0;
    while n < 8 {
        let p = PoolParams::new(
            3.0 * gauss(&mut rng),
            3.0 * gauss(&mut rng),
            3.0 * gauss(&mut rng),
        );
        if feasible_contains(p) {
            continue;
        }
        let proj = project_to_feasible(p).unwrap();
        assert!(proj.distance(grid_projection(p, 1e-2)) < 1e-4);
        assert!((feasible_boundary_distance(p).unwrap() + p.distance(proj)).abs() < 1e-12);
        n += 1;
    }
}

#[test]
fn trace_first_pooling_is_partial_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rho = random_density(4, &mut rng);
    let out = apply_pool(PoolParams::trace_first(), &rho);
    assert!((out - partial_trace(&rho, &[2, 2], &[1]).unwrap()).norm() < 1e-12);
    assert!(feasible_contains(PoolParams::trace_first()));
}
