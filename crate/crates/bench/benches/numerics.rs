use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use sharpbound::extremal::{crescent_denominator_series, crescent_f, sharpness_sweep_deriv, DerivSweep};
use sharpbound::geometry::convex_hull;
use sharpbound::harness::{run_suite, CorpusEntry, FunctionSpec, Inequality, SuiteGrid};
use sharpbound::series::{cauchy_derivative_default, reciprocal};
use sharpbound::CrescentMapParams;

fn series(c: &mut Criterion) {
    let params = CrescentMapParams::default();
    let b = crescent_denominator_series(params, 256).unwrap();
    c.bench_function("reciprocal order 256", |bench| bench.iter(|| reciprocal(black_box(&b)).unwrap()));

    let f = crescent_f(params).unwrap();
    let z = Complex64::new(0.3, 0.2);
    c.bench_function("cauchy derivative n=3, 512 nodes", |bench| {
        bench.iter(|| cauchy_derivative_default(&f, black_box(z), 3).unwrap())
    });
}

fn geometry(c: &mut Criterion) {
    let samples = CrescentMapParams::default().domain().boundary_samples(4096);
    c.bench_function("convex hull of 4096 crescent samples", |bench| {
        bench.iter(|| convex_hull(black_box(&samples)).unwrap())
    });
}

fn harness(c: &mut Criterion) {
    let entry = CorpusEntry::from_spec(&FunctionSpec::from_name("crescent").unwrap(), None).unwrap();
    let grid = SuiteGrid::default();
    let mut group = c.benchmark_group("harness");
    group.sample_size(10);
    group.bench_function("full suite on the crescent entry", |bench| {
        bench.iter(|| run_suite(&entry, &grid, &Inequality::ALL, 1e-6).unwrap())
    });
    group.bench_function("deriv sweep, default schedule", |bench| {
        bench.iter(|| sharpness_sweep_deriv(&DerivSweep::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, series, geometry, harness);
criterion_main!(benches);
