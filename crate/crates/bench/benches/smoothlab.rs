use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use smoothlab::analytic::euler_product;
use smoothlab::inequality::{run_suite, Suite};
use smoothlab::smooth::{count_by_residue, count_smooth_bigx};
use smoothlab::{
    character_group, count_smooth, saddle_alpha, BigX, ContourPlan, ContourSpec, SmoothCountQuery,
    SmoothingKernel,
};

fn counting(c: &mut Criterion) {
    c.bench_function("count_smooth 1e7 y=50", |b| {
        b.iter(|| count_smooth(black_box(&SmoothCountQuery::new(1e7, 50.0))).unwrap())
    });
    c.bench_function("count_by_residue 1e6 y=100 q=12", |b| {
        b.iter(|| count_by_residue(black_box(1e6), 100.0, 12).unwrap())
    });
    c.bench_function("count_smooth_bigx 2^721 y=5", |b| {
        b.iter(|| count_smooth_bigx(black_box(BigX::new(2, 721).unwrap()), 5.0, 1).unwrap())
    });
}

fn analytic(c: &mut Criterion) {
    let chi = character_group(7).unwrap().remove(1);
    c.bench_function("euler_product y=1e4", |b| {
        b.iter(|| euler_product(black_box(Complex64::new(0.8, 14.0)), &chi, 1e4).unwrap())
    });
    c.bench_function("saddle_alpha 1e12 y=1e3", |b| {
        b.iter(|| saddle_alpha(black_box(1e12), 1e3, None, false).unwrap())
    });
    let kernel = SmoothingKernel::default();
    c.bench_function("mellin |t|=50", |b| {
        b.iter(|| kernel.mellin(black_box(Complex64::new(0.6, 50.0))).unwrap())
    });
}

fn contour(c: &mut Criterion) {
    let kernel = SmoothingKernel::default();
    let spec = ContourSpec::at_saddle(1e5, 30.0, 100.0).unwrap();
    let mut group = c.benchmark_group("contour");
    group.sample_size(10);
    group.bench_function("plan 1e5 y=30 T=100", |b| {
        b.iter(|| ContourPlan::new(black_box(1e5), 30.0, &kernel, &spec).unwrap())
    });
    let plan = ContourPlan::new(1e5, 30.0, &kernel, &spec).unwrap();
    let chi = character_group(12).unwrap().remove(3);
    group.bench_function("evaluate q=12", |b| {
        b.iter(|| plan.evaluate(black_box(&chi)).unwrap())
    });
    group.finish();
}

fn inequalities(c: &mut Criterion) {
    let mut group = c.benchmark_group("inequality");
    group.sample_size(10);
    group.bench_function("majorant x100", |b| {
        b.iter(|| run_suite(Suite::Majorant, 100, black_box(0)).unwrap())
    });
    group.bench_function("lemma1 x5", |b| {
        b.iter(|| run_suite(Suite::Lemma1, 5, black_box(0)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, counting, analytic, contour, inequalities);
criterion_main!(benches);
