use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use relk2::dennis_stein::{build_presentation, Mode, DEFAULT_BUDGET_PAIRS};
use relk2::k2::{k2_relative_structure, GroupRingTensor, OracleOptions, Route};
use relk2::linear::{hnf, snf};
use relk2::{GroupSpec, MatrixZ};

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> MatrixZ {
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-20..=20)).collect()).collect();
    MatrixZ::from_rows(n, &rows).expect("square")
}

fn linear(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut group = c.benchmark_group("linear");
    for n in [4usize, 8, 16] {
        let m = random_matrix(&mut rng, n);
        group.bench_with_input(BenchmarkId::new("snf", n), &m, |b, m| b.iter(|| snf(black_box(m))));
        group.bench_with_input(BenchmarkId::new("hnf", n), &m, |b, m| b.iter(|| hnf(black_box(m))));
    }
    group.finish();
}

fn tensor_route(c: &mut Criterion) {
    let mut group = c.benchmark_group("tensor_route");
    for (p, e) in [(2u64, vec![1u32, 1]), (2, vec![1, 1, 1]), (3, vec![1, 1]), (5, vec![2])] {
        let spec = GroupSpec::new(p, e).expect("valid spec");
        group.bench_function(format!("F{p}[{spec}]"), |b| {
            b.iter(|| k2_relative_structure(black_box(&spec), Route::Tensor, OracleOptions::default()).expect("tensor route"))
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (p, e, mode) in [
        (2u64, vec![1u32, 1], Mode::Full),
        (3, vec![1], Mode::Full),
        (2, vec![1, 1], Mode::Reduced),
        (2, vec![1, 2], Mode::Reduced),
    ] {
        let spec = GroupSpec::new(p, e).expect("valid spec");
        let model = GroupRingTensor::new(&spec).expect("model");
        group.bench_function(format!("F{p}[{spec}] {mode}"), |b| {
            b.iter(|| build_presentation(black_box(&model.ctx), mode, DEFAULT_BUDGET_PAIRS).expect("presentation"))
        });
    }
    group.finish();
}

criterion_group!(benches, linear, tensor_route, oracle);
criterion_main!(benches);
