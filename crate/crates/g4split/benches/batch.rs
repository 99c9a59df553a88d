use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use g4split::locus::{class_representatives, implication_survey, SurveyConfig};
use g4split::squares::{table_batch, BatchConfig};

fn locus_survey(c: &mut Criterion) {
    let sigmas = class_representatives();
    let mut g = c.benchmark_group("locus_survey");
    g.sample_size(10);
    for sequential in [false, true] {
        let cfg = SurveyConfig { p: 10007, n: 60, seed: 1, sequential, ..Default::default() };
        let name = if sequential { "sequential" } else { "parallel" };
        g.bench_with_input(BenchmarkId::new(name, cfg.n), &cfg, |b, cfg| {
            b.iter(|| implication_survey(black_box(&sigmas), cfg).unwrap())
        });
    }
    g.finish();
}

fn squares_batch(c: &mut Criterion) {
    let mut g = c.benchmark_group("squares_batch");
    g.sample_size(10);
    for sequential in [false, true] {
        let cfg = BatchConfig { per_row: 8, mu_prime_per_row: 4, build_x: false, sequential, ..Default::default() };
        let name = if sequential { "sequential" } else { "parallel" };
        g.bench_with_input(BenchmarkId::new(name, cfg.per_row), &cfg, |b, cfg| b.iter(|| table_batch(black_box(cfg)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, locus_survey, squares_batch);
criterion_main!(benches);
