//! Microbenchmarks for the per-point work that dominates parameter scans:
//! interior root finding, kernel extraction, the compatibility determinant,
//! the Lyapunov-based symmetrizer, and a full margin-method classification.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use shockstab_core::lopatinski::dispersion::dispersion_roots;
use shockstab_core::lopatinski::kernel::boundary_kernel;
use shockstab_core::lopatinski::symbols::assemble_symbols;
use shockstab_core::symmetrizer::Matrix6;
use shockstab_core::{
    assemble_symmetrizer, classify, classify_stretching, derived_scales, mode_solution,
    ClassifyConfig, Frequency, MethodSelection, ShockParameters,
};

fn reference_front() -> ShockParameters {
    ShockParameters::new(0.9, 2.0, [[0.5, 0.0], [0.0, 0.8]], None).unwrap()
}

fn bench_dispersion_roots(c: &mut Criterion) {
    let scales = derived_scales(&reference_front()).unwrap();
    let s = Complex64::new(0.35, -0.8);
    c.bench_function("dispersion_roots", |b| {
        b.iter(|| dispersion_roots(black_box(&scales), black_box(s), black_box(0.6)))
    });
}

fn bench_boundary_kernel(c: &mut Criterion) {
    let scales = derived_scales(&reference_front()).unwrap();
    let sym = assemble_symbols(&scales);
    let s = Complex64::new(0.35, -0.8);
    c.bench_function("boundary_kernel", |b| {
        b.iter(|| boundary_kernel(black_box(&sym), black_box(s), black_box(0.6)).unwrap())
    });
}

fn bench_compatibility_determinant(c: &mut Criterion) {
    let scales = derived_scales(&reference_front()).unwrap();
    let freq = Frequency::new(0.35, -0.8, 0.6).unwrap();
    c.bench_function("compatibility_determinant", |b| {
        b.iter(|| mode_solution(black_box(&scales), black_box(&freq)).unwrap())
    });
}

fn bench_symmetrizer(c: &mut Criterion) {
    let scales = derived_scales(&reference_front()).unwrap();
    let g0 = Matrix6::identity();
    c.bench_function("lyapunov_symmetrizer", |b| {
        b.iter(|| assemble_symmetrizer(black_box(&scales), black_box(2.0), black_box(&g0)).unwrap())
    });
}

fn bench_scan_row(c: &mut Criterion) {
    let params = reference_front();
    let config = ClassifyConfig {
        methods: MethodSelection::parse("energy,lc").unwrap(),
        ..ClassifyConfig::default()
    };
    c.bench_function("classify_margin_methods", |b| {
        b.iter(|| classify(black_box(&params), black_box(&config)).unwrap())
    });
}

fn bench_stretching_closed_form(c: &mut Criterion) {
    let scales = derived_scales(&reference_front()).unwrap();
    c.bench_function("stretching_closed_form", |b| {
        b.iter(|| classify_stretching(black_box(&scales)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_dispersion_roots,
    bench_boundary_kernel,
    bench_compatibility_determinant,
    bench_symmetrizer,
    bench_scan_row,
    bench_stretching_closed_form
);
criterion_main!(benches);
