// SPDX-License-Identifier: MIT OR Apache-2.0
use criterion::*;
use segwise_bench::step_series;
use segwise_core::detect::{dp_exact, pelt, anchor_penalty, penalty_path, wbs_rank, PenaltyGrid};
use segwise_core::rng::substream;
use segwise_core::DetectorConfig;

criterion_group!(benches, bench_pelt, bench_wbs, bench_dp);
criterion_main!(benches);

fn bench_pelt(c: &mut Criterion) {
    let mut group = c.benchmark_group("pelt");
    for n in [500, 2000, 8000] {
        let s = step_series(n, n / 100, 1.0, 1);
        let penalty = anchor_penalty(&s);
        group.bench_with_input(BenchmarkId::new("anchor", n), &s, |b, s| b.iter(|| pelt(s, penalty, 2).unwrap()));
    }
    let s = step_series(1000, 10, 1.0, 2);
    group.bench_function("penalty_path/1000", |b| b.iter(|| penalty_path(&s, &PenaltyGrid::Auto, 2).unwrap()));
    group.finish();
}

fn bench_wbs(c: &mut Criterion) {
    let mut group = c.benchmark_group("wbs");
    let cfg = DetectorConfig::wbs();
    for n in [500, 2000, 8000] {
        let s = step_series(n, n / 100, 1.0, 3);
        group.bench_with_input(BenchmarkId::new("rank", n), &s, |b, s| {
            b.iter(|| wbs_rank(s, &cfg, &mut substream(0, &[])).unwrap())
        });
    }
    group.finish();
}

fn bench_dp(c: &mut Criterion) {
    let mut group = c.benchmark_group("dp");
    group.sample_size(20);
    for n in [250, 500, 1000] {
        let s = step_series(n, 5, 1.0, 4);
        group.bench_with_input(BenchmarkId::new("r20", n), &s, |b, s| b.iter(|| dp_exact(s, 20, 2).unwrap()));
    }
    group.finish();
}
