use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mzn_core::divisors::PairingMatrix;
use mzn_core::exactlin::{rank_integer, smith};

fn pairing_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("pairing_build");
    group.sample_size(10);
    for n in [7usize, 8, 9] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| PairingMatrix::build(black_box(n)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| PairingMatrix::build_sequential(black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn elimination(c: &mut Criterion) {
    let mut group = c.benchmark_group("elimination");
    group.sample_size(10);
    for n in [7usize, 8] {
        let p = PairingMatrix::build(n).unwrap();
        group.bench_with_input(BenchmarkId::new("rank", n), p.matrix(), |b, m| {
            b.iter(|| rank_integer(black_box(m)))
        });
        group.bench_with_input(BenchmarkId::new("smith", n), p.matrix(), |b, m| {
            b.iter(|| smith(black_box(m)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pairing_build, elimination);
criterion_main!(benches);
