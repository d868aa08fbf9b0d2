//! Single-worker versus full-pool timings for the parallel sweeps. Build
//! with `--no-default-features` to measure the sequential fallback.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quadapn::analysis::{
    diff_uniformity_exhaustive, diff_uniformity_quadratic, walsh_spectrum, Method,
};
use quadapn::family::{known, KnownFunction, ParamSpace};
use quadapn::workflow::{proof_sweep, sweep_family};
use quadapn::FieldCtx;

fn pools() -> Vec<(usize, rayon::ThreadPool)> {
    let full = rayon::current_num_threads().max(2);
    [1, full]
        .into_iter()
        .map(|t| {
            (
                t,
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .unwrap(),
            )
        })
        .collect()
}

fn spectra(c: &mut Criterion) {
    let ctx = Arc::new(FieldCtx::new(10, None).unwrap());
    let f = known(&ctx, KnownFunction::Gold { i: 3 }).unwrap();
    let mut g = c.benchmark_group("spectra_n10");
    g.sample_size(10);
    for (threads, pool) in pools() {
        g.bench_with_input(BenchmarkId::new("ddt", threads), &threads, |b, _| {
            b.iter(|| pool.install(|| diff_uniformity_exhaustive(&f)))
        });
        g.bench_with_input(
            BenchmarkId::new("kernel_rank", threads),
            &threads,
            |b, _| b.iter(|| pool.install(|| diff_uniformity_quadratic(&f).unwrap())),
        );
        g.bench_with_input(BenchmarkId::new("walsh", threads), &threads, |b, _| {
            b.iter(|| pool.install(|| walsh_spectrum(&f)))
        });
    }
    g.finish();
}

fn family(c: &mut Criterion) {
    let ctx = Arc::new(FieldCtx::new(6, None).unwrap());
    let params: Vec<_> = ParamSpace::new(&ctx, 2, 1)
        .unwrap()
        .iter()
        .take(36)
        .collect();
    let mut g = c.benchmark_group("family_n6");
    g.sample_size(10);
    for (threads, pool) in pools() {
        g.bench_with_input(BenchmarkId::new("sweep_468", threads), &threads, |b, _| {
            b.iter(|| pool.install(|| sweep_family(&ctx, 2, 1, Method::Both).unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("proof_36", threads), &threads, |b, _| {
            b.iter(|| pool.install(|| proof_sweep(&ctx, &params, 10, 0).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, spectra, family);
criterion_main!(benches);
