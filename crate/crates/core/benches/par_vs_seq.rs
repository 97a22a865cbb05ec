use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eqnn::equiv::{twirl, TwirlConfig};
use eqnn::spin::{make_dataset, DegeneratePolicy};
use eqnn::su2::{pool_problem, PoolParams};
use eqnn::train::{init_params, loss_gradient, GradMethod, ModelSpec, PoolingKind};
use eqnn::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[path = "../tests/common/mod.rs"]
mod common;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn points(n: usize, r: f64, seed: u64) -> Vec<PoolParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| PoolParams::new(rng.random_range(-r..r), rng.random_range(-r..r), rng.random_range(-r..r)))
        .collect()
}

fn mc_twirl(c: &mut Criterion) {
    let problem = pool_problem();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let phi = common::random_transfer(4, 2, &mut rng);
    let mut g = c.benchmark_group("mc_twirl");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| twirl(black_box(&phi), &problem, &TwirlConfig::haar(2000, 7).with_exec(exec)).unwrap())
        });
    }
    g.finish();
}

fn dataset(c: &mut Criterion) {
    let mut g = c.benchmark_group("dataset_gen");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| make_dataset(8, 8, (0.0, 2.0), 0, DegeneratePolicy::RandomInSpace, exec).unwrap())
        });
    }
    g.finish();
}

fn gradients(c: &mut Criterion) {
    let model = ModelSpec::Eqcnn {
        n: 7,
        reps: 2,
        pooling: PoolingKind::Parametric,
    }
    .build()
    .unwrap();
    let params = init_params(&model, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let states: Vec<_> = (0..4).map(|_| common::random_state(1 << 7, &mut rng)).collect();
    let labels = [1.0, 1.0, 0.0, 0.0];
    let mut g = c.benchmark_group("gradient_probes");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| loss_gradient(&model, &params, &states, &labels, GradMethod::default(), exec).unwrap())
        });
    }
    g.finish();
}

fn grid_oracle(c: &mut Criterion) {
    let pts = points(16, 2.0, 4);
    let mut g = c.benchmark_group("grid_oracle");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec.map_slice(&pts, |&p| common::grid_projection(p, 1e-2)))
        });
    }
    g.finish();
}

fn feasibility_sweep(c: &mut Criterion) {
    let pts = points(10_000, 2.0, 5);
    let mut g = c.benchmark_group("feasibility_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec.map_slice(&pts, |&p| eqnn::su2::feasible_contains(p) == common::choi_feasible(p, -1e-9))
                    .into_iter()
                    .filter(|&agree| !agree)
                    .count()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, mc_twirl, dataset, gradients, grid_oracle, feasibility_sweep);
criterion_main!(benches);
