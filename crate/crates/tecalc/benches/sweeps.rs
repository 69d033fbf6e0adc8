use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tecalc::hochschild::harness::{run_suite, SuiteConfig};
use tecalc::hochschild::samples;
use tecalc::levelt::{levelt_sweep, rigidity_sweep};
use tecalc::par::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn hochschild_suite(c: &mut Criterion) {
    let alg = samples::sample("matrix2-t").expect("shipped sample");
    let mut group = c.benchmark_group("hochschild-suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SuiteConfig {
            trials: 40,
            exec,
            ..SuiteConfig::default()
        };
        group.bench_function(name, |b| b.iter(|| black_box(run_suite(&alg, &cfg))));
    }
    group.finish();
}

fn levelt(c: &mut Criterion) {
    let mut group = c.benchmark_group("levelt-sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(levelt_sweep(16, 0, 4, 6, exec))));
    }
    group.finish();

    let mut group = c.benchmark_group("rigidity-sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(rigidity_sweep(16, 0, 3, 6, exec))));
    }
    group.finish();
}

criterion_group!(benches, hochschild_suite, levelt);
criterion_main!(benches);
