//! Parallel core against a single worker on the same workloads. Built
//! without the `parallel` feature, both variants run the sequential path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

use degdiv::distributions::{BadEstimator, Distribution};
use degdiv::exact::exact_f;
use degdiv::generators::gnp;
use degdiv::random::{run_cell, SweepConfig};
use degdiv::{Seed, VertexSet};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("sequential", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("parallel", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn bench(c: &mut Criterion) {
    let small = gnp(20, 0.5, Seed(1)).unwrap();
    let mid = gnp(400, 0.3, Seed(2)).unwrap();
    let u = VertexSet::from_indices(400, 0..8).unwrap();
    let dist = Distribution::product(vec![
        Distribution::blended(u.clone(), u.complement(), 0.05).unwrap(),
        Distribution::trivial(u.clone()),
    ])
    .unwrap();
    let estimator = BadEstimator::new(20_000).unwrap();
    let members = u.to_vec();
    let sweep = SweepConfig::default();

    let mut group = c.benchmark_group("core");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("exact_f_n20", name), |b| {
            b.iter(|| pool.install(|| black_box(exact_f(&small).unwrap().f)))
        });
        group.bench_function(BenchmarkId::new("bad_batch", name), |b| {
            b.iter(|| {
                pool.install(|| {
                    black_box(estimator.batch(&dist, &mid, &members, &mid.vertices(), Seed(3)).unwrap())
                })
            })
        });
        group.bench_function(BenchmarkId::new("sweep_cell_n1024", name), |b| {
            b.iter(|| pool.install(|| black_box(run_cell(&sweep, 1024, 0.1, 0).unwrap().f_lower)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
