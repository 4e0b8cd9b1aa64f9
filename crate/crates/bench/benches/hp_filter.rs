//! Decomposition throughput across series lengths and penalty regimes.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cycleprobe_bench::level_series;
use cycleprobe_core::hp::{hp_decompose, lambda_sweep, DEFAULT_LAMBDA, DEFAULT_LAMBDA_SWEEP};

fn bench_decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("hp_decompose");
    for len in [61usize, 200, 1000] {
        let series = level_series(len);
        group.bench_function(format!("T{len}_lambda1600"), |b| {
            b.iter(|| hp_decompose(black_box(&series), black_box(DEFAULT_LAMBDA)).unwrap())
        });
    }
    // Stiff penalties take the complementary solve path.
    let series = level_series(200);
    group.bench_function("T200_lambda1e12", |b| {
        b.iter(|| hp_decompose(black_box(&series), black_box(1e12)).unwrap())
    });
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let series = level_series(61);
    c.bench_function("lambda_sweep_T61_3_penalties", |b| {
        b.iter(|| lambda_sweep(black_box(&series), black_box(&DEFAULT_LAMBDA_SWEEP)).unwrap())
    });
}

criterion_group!(benches, bench_decompose, bench_sweep);
criterion_main!(benches);
