//! Parallel vs sequential timings for the two data-parallel hot paths:
//! the order-3 enumeration sweep and coboundary matrix assembly.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use fq_core::cohomology::{coboundary_matrix, ScalarModuleParams};
use fq_core::construct::{affine_structure, AffineParams};
use fq_core::enumerate::{enumerate, enumerate_seq, SearchConfig};

fn bench_enumeration(c: &mut Criterion) {
    let cfg = SearchConfig::quandles(3, 3);
    let mut group = c.benchmark_group("enumerate-order3");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter_batched(
            || cfg.clone(),
            |cfg| enumerate(&cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(
            || cfg.clone(),
            |cfg| enumerate_seq(&cfg).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_matrix_assembly(c: &mut Criterion) {
    let s = affine_structure(&AffineParams::new(3, &[2, 1, 1]).unwrap(), None).unwrap();
    let params = ScalarModuleParams::alexander(3, &[2, 1, 1]).unwrap();
    let mut group = c.benchmark_group("coboundary-matrix-p3");
    group.sample_size(10);
    group.bench_function("assemble", |b| {
        b.iter(|| coboundary_matrix(&s, &params, 3).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_enumeration, bench_matrix_assembly);
criterion_main!(benches);
