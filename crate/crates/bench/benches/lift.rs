use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;
use tanglie_core::tangent::{
    lifted_connection_closed_form, lifted_connection_structure_constants, lifted_curvature,
};
use tanglie_core::{build_tangent, catalog, LieAlgebra, Metric};

fn metric(n: usize, seed: f64) -> Metric {
    let a = DMatrix::from_fn(n, n, |i, j| ((i * n + j) as f64 * 0.37 + seed).sin());
    Metric::new(a.transpose() * &a + DMatrix::identity(n, n) * 0.5).unwrap()
}

fn cases() -> Vec<(&'static str, LieAlgebra)> {
    vec![
        ("heisenberg", catalog::heisenberg()),
        ("solvable_rr2", catalog::solvable_rr2()),
        ("su2", catalog::su2()),
        ("abelian6", catalog::abelian(6)),
    ]
}

fn bench_lift(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_tangent");
    for (name, a) in cases() {
        let (g1, g2) = (metric(a.dim(), 0.1), metric(a.dim(), 1.3));
        group.bench_with_input(BenchmarkId::from_parameter(name), &a, |b, a| {
            b.iter(|| build_tangent(black_box(a), &g1, &g2).unwrap())
        });
    }
    group.finish();
}

fn bench_connection(c: &mut Criterion) {
    let mut group = c.benchmark_group("lifted_connection");
    for (name, a) in cases() {
        let t = build_tangent(&a, &metric(a.dim(), 0.1), &metric(a.dim(), 1.3)).unwrap();
        group.bench_function(BenchmarkId::new("koszul", name), |b| {
            b.iter(|| black_box(&t).lifted_geometry().levi_civita())
        });
        group.bench_function(BenchmarkId::new("closed", name), |b| {
            b.iter(|| {
                let c1 = t.frame_geometry1().levi_civita();
                let c2 = t.frame_geometry2().levi_civita();
                lifted_connection_closed_form(black_box(&t), &c1, &c2)
            })
        });
        group.bench_function(BenchmarkId::new("structconst", name), |b| {
            b.iter(|| lifted_connection_structure_constants(black_box(&t)))
        });
    }
    group.finish();
}

fn bench_curvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("lifted_curvature");
    for (name, a) in cases() {
        let t = build_tangent(&a, &metric(a.dim(), 0.1), &metric(a.dim(), 1.3)).unwrap();
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| lifted_curvature(black_box(&t)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_lift, bench_connection, bench_curvature);
criterion_main!(benches);
