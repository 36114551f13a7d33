use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rawlsian_bench::{correlated_profile, uniform_profile};
use rawlsian_core::rules::{fractional_boston, mtav, probabilistic_serial, rawlsian};

fn rawlsian_rule(c: &mut Criterion) {
    let mut group = c.benchmark_group("rawlsian");
    group.sample_size(10);
    for n in [5, 10, 20] {
        let uniform = uniform_profile(n, 1);
        group.bench_with_input(BenchmarkId::new("uniform", n), &uniform, |b, p| b.iter(|| rawlsian(black_box(p))));
        let correlated = correlated_profile(n, 1);
        group.bench_with_input(BenchmarkId::new("correlated", n), &correlated, |b, p| {
            b.iter(|| rawlsian(black_box(p)))
        });
    }
    group.finish();
}

fn other_rules(c: &mut Criterion) {
    let mut group = c.benchmark_group("rules");
    for n in [10, 40] {
        let p = correlated_profile(n, 2);
        group.bench_with_input(BenchmarkId::new("ps", n), &p, |b, p| b.iter(|| probabilistic_serial(black_box(p))));
        group.bench_with_input(BenchmarkId::new("boston", n), &p, |b, p| b.iter(|| fractional_boston(black_box(p))));
        group.bench_with_input(BenchmarkId::new("mtav", n), &p, |b, p| b.iter(|| mtav(black_box(p), 0)));
    }
    group.finish();
}

criterion_group!(benches, rawlsian_rule, other_rules);
criterion_main!(benches);
