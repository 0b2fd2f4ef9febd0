use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracvar_core::numerics::{symmetric_eigen, Grid, SampledFunction, SymmetricMatrix};
use fracvar_core::operators::{b_apply, k_apply, Kernel, OperatorBinding, ParameterSet, Variant};
use fracvar_core::sturm_liouville::{assemble, SLProblem};

fn binding(variant: Variant, lambda: f64, mu: f64) -> OperatorBinding {
    OperatorBinding::new(ParameterSet::new(0.0, 1.0, lambda, mu).unwrap(), Kernel::power_law(0.6, variant).unwrap())
        .unwrap()
}

fn operators(c: &mut Criterion) {
    let mut group = c.benchmark_group("k_apply");
    let two_sided = binding(Variant::Integral, 0.7, -1.3);
    let volterra =
        OperatorBinding::new(ParameterSet::left(0.0, 1.0).unwrap(), Kernel::difference(|s| (-s).exp())).unwrap();
    for n in [512, 1024, 2048, 4096] {
        let f = SampledFunction::from_fn(Grid::new(0.0, 1.0, n).unwrap(), |t| (3.0 * t).sin() + t).unwrap();
        group.bench_with_input(BenchmarkId::new("power_law_two_sided", n), &f, |b, f| {
            b.iter(|| k_apply(black_box(&two_sided), black_box(f)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("difference_kernel", n), &f, |b, f| {
            b.iter(|| k_apply(black_box(&volterra), black_box(f)).unwrap())
        });
    }
    group.finish();

    let caputo = binding(Variant::Derivative, 1.0, 0.0);
    let mut group = c.benchmark_group("b_apply");
    for n in [1024, 4096] {
        let f = SampledFunction::from_fn(Grid::new(0.0, 1.0, n).unwrap(), |t| t * t.exp()).unwrap();
        group.bench_with_input(BenchmarkId::new("caputo_left", n), &f, |b, f| {
            b.iter(|| b_apply(black_box(&caputo), black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("symmetric_eigen");
    for dim in [16, 50, 100, 200] {
        // Deterministic, well-spread test matrix.
        let mut e = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                e[i * dim + j] = 1.0 / (1.0 + (i as f64 - j as f64).abs()) + if i == j { i as f64 } else { 0.0 };
            }
        }
        let a = SymmetricMatrix::new(dim, e).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| symmetric_eigen(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn ritz_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble");
    group.sample_size(10);
    let p = SLProblem::new(0.75).unwrap();
    for (m, n) in [(8, 1024), (16, 2048), (32, 4096)] {
        let grid = p.grid(n).unwrap();
        group.bench_function(BenchmarkId::new("alpha_0.75", format!("m{m}_n{n}")), |b| {
            b.iter(|| assemble(black_box(&p), m, grid).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, operators, eigensolver, ritz_assembly);
criterion_main!(benches);
