use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use netresponse::{
    algebraic_distances, ms_solve, solve_exact, AlgDistParams, ReducedInstance, SolveBudget,
    VCycleConfig,
};
use netresponse_bench::fixture;

fn bench_algebraic_distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("algebraic_distances");
    for n in [500usize, 2000] {
        let inst = fixture(n, 6.0, n as u64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| {
                algebraic_distances(black_box(inst.graph()), &AlgDistParams::default(), 7).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_exact_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_exact");
    for n in [15usize, 24] {
        let inst = fixture(n, 5.0, 100 + n as u64);
        let red = ReducedInstance::from_instance(&inst).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &red, |b, red| {
            b.iter(|| solve_exact(black_box(red), 40, &SolveBudget::UNLIMITED, None).unwrap())
        });
    }
    group.finish();
}

fn bench_ms_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("ms_solve");
    group.sample_size(10);
    for n in [500usize, 2000] {
        let inst = fixture(n, 6.0, 200 + n as u64);
        let cfg = VCycleConfig { subset_cap: 10, refine_passes: 3, ..VCycleConfig::default() };
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| ms_solve(black_box(inst), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_algebraic_distances,
    bench_exact_solver,
    bench_ms_solve
);
criterion_main!(benches);
