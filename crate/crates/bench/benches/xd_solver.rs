use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mtlogloss::{xd_grid_oracle, xd_min_hxu, JointPmf, XdOptions};
use mtlogloss_bench::random_pmf;

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("xd_min_hxu");
    group.sample_size(10);
    let opts = XdOptions { restarts: 8, ..XdOptions::default() };
    for (name, p) in [("dsbs", JointPmf::dsbs(0.25)), ("3x3", random_pmf(3, 3, 11)), ("4x6", random_pmf(4, 6, 12))] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| {
            b.iter(|| xd_min_hxu(p, black_box(0.5), &opts).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let p = JointPmf::dsbs(0.25);
    let mut group = c.benchmark_group("xd_grid_oracle");
    group.sample_size(10);
    for step in [0.05, 0.02] {
        group.bench_with_input(BenchmarkId::from_parameter(step), &step, |b, &s| {
            b.iter(|| xd_grid_oracle(&p, black_box(0.25), s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, solver, oracle);
criterion_main!(benches);
