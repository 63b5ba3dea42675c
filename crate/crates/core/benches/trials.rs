//! Sequential versus rayon fan-out over independent trials.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lapbound::par::Execution;
use lapbound::random::{run_experiment, GnpConfig, Mode};
use lapbound::verify::{run_suite, Suite, VerifyConfig};

fn modes() -> Vec<(&'static str, Execution)> {
    let mut m = vec![("sequential", Execution::Sequential)];
    if cfg!(feature = "parallel") {
        m.push(("parallel", Execution::Parallel));
    }
    m
}

fn experiments(c: &mut Criterion) {
    let mut group = c.benchmark_group("experiment");
    group.sample_size(10);
    let order = GnpConfig::new(Mode::OrderCheck, 12, 0.4, 1, 1, 200, 0);
    let main3 = GnpConfig::new(Mode::Main3, 20, 0.65, 1, 1, 8, 0);
    for (name, exec) in modes() {
        group.bench_with_input(
            BenchmarkId::new("order-check n=12", name),
            &exec,
            |b, &exec| b.iter(|| run_experiment(black_box(&order), exec).unwrap()),
        );
        group.bench_with_input(BenchmarkId::new("main3 n=20", name), &exec, |b, &exec| {
            b.iter(|| run_experiment(black_box(&main3), exec).unwrap())
        });
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for suite in [Suite::Hodge, Suite::Main1] {
        let cfg = VerifyConfig {
            suite,
            trials: 50,
            seed: 0,
            max_vertices: 7,
        };
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(suite.name(), name), &exec, |b, &exec| {
                b.iter(|| run_suite(black_box(&cfg), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, experiments, suites);
criterion_main!(benches);
