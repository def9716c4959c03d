use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entropion::entropy::{
    relative_entropy, relative_entropy_integral, relative_entropy_spectral_kernel, QuadratureConfig,
};
use entropion::superop::{solve_resolvent, SuperOpSpec};
use entropion_bench::{Fixture, DIMS};

fn eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig");
    for d in DIMS {
        let f = Fixture::new(d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &f, |b, f| b.iter(|| black_box(&f.p).eig().unwrap()));
    }
    group.finish();
}

fn resolvent(c: &mut Criterion) {
    let mut group = c.benchmark_group("resolvent");
    for d in DIMS {
        let f = Fixture::new(d);
        group.bench_with_input(BenchmarkId::new("setup_and_solve", d), &f, |b, f| {
            b.iter(|| {
                let spec = SuperOpSpec::new(&f.p, &f.q, 0.7).unwrap();
                solve_resolvent(&spec, black_box(&f.x)).unwrap()
            })
        });
        let spec = SuperOpSpec::new(&f.p, &f.q, 0.7).unwrap();
        group.bench_with_input(BenchmarkId::new("solve", d), &f, |b, f| {
            b.iter(|| solve_resolvent(&spec, black_box(&f.x)).unwrap())
        });
    }
    group.finish();
}

fn relative_entropy_routes(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let mut group = c.benchmark_group("relative_entropy");
    for d in DIMS {
        let f = Fixture::new(d);
        group.bench_with_input(BenchmarkId::new("spectral", d), &f, |b, f| {
            b.iter(|| relative_entropy(black_box(&f.p), black_box(&f.q)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("kernel", d), &f, |b, f| {
            b.iter(|| relative_entropy_spectral_kernel(black_box(&f.p), black_box(&f.q)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("quadrature", d), &f, |b, f| {
            b.iter(|| relative_entropy_integral(black_box(&f.p), black_box(&f.q), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eig, resolvent, relative_entropy_routes);
criterion_main!(benches);
