use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use witt_core::gen::{self, random_cancellation_instance, random_nondegenerate, random_symmetric};
use witt_core::milnor::{triangle_check, PfisterConvention};
use witt_core::*;

fn fields() -> [(&'static str, FieldCtx); 3] {
    [("Fp(13)", FieldCtx::prime_field(13).unwrap()), ("Q", FieldCtx::Rationals), ("R", FieldCtx::RealQ)]
}

fn diagonalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("diagonalize");
    for (name, ctx) in fields() {
        for n in [3usize, 6] {
            let q = random_symmetric(&mut gen::seeded(n as u64), ctx, n);
            group.bench_with_input(BenchmarkId::new(name, n), &q, |b, q| b.iter(|| q.diagonalize()));
        }
    }
    group.finish();
}

fn cancellation(c: &mut Criterion) {
    let mut group = c.benchmark_group("cancel");
    for (name, ctx) in fields().into_iter().take(2) {
        let inst = random_cancellation_instance(&mut gen::seeded(7), ctx, 5);
        group.bench_function(BenchmarkId::new("algebraic", name), |b| {
            b.iter(|| cancel_first_algebraic(&inst.a, &inst.b, &inst.m).unwrap())
        });
        group.bench_function(BenchmarkId::new("geometric", name), |b| {
            b.iter(|| cancel_first_geometric(&inst.a, &inst.b, &inst.m).unwrap())
        });
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("witt_decompose");
    group.sample_size(20);
    for (name, ctx) in fields() {
        let q = random_nondegenerate(&mut gen::seeded(3), ctx, 5);
        group.bench_with_input(BenchmarkId::new(name, 5), &q, |b, q| {
            b.iter(|| witt_decompose(q, isotropy::DEFAULT_BUDGET).unwrap())
        });
    }
    // an isotropic quaternary form whose coefficients have large prime factors
    let q = DiagonalForm::from_ints(FieldCtx::Rationals, &[130, -19726, 26549667235, -207065]).to_gram();
    group.bench_function("Q/large-primes", |b| b.iter(|| find_isotropic_vector(black_box(&q), isotropy::DEFAULT_BUDGET).unwrap()));
    group.finish();
}

fn hilbert(c: &mut Criterion) {
    let ctx = FieldCtx::Rationals;
    let a = ctx.ratio(-1_234_567, 89).unwrap();
    let b = ctx.ratio(987_654, 321).unwrap();
    let places = [Place::RealPlace, Place::prime(2), Place::prime(3), Place::prime(89)];
    c.bench_function("hilbert_symbol/Q", |bch| {
        bch.iter(|| places.iter().map(|v| hilbert_symbol(&a, &b, v).unwrap()).product::<i8>())
    });
}

fn rings(c: &mut Criterion) {
    let mut group = c.benchmark_group("structure");
    group.sample_size(10);
    // the ring table is memoized, so after the first sample this times a cache lookup
    group.bench_function("witt_ring/Fp(47)", |b| {
        b.iter(|| enumerate_witt_ring(FieldCtx::prime_field(47).unwrap(), None).unwrap())
    });
    group.bench_function("triangle/Fp(13)/n<=4", |b| {
        b.iter(|| triangle_check(FieldCtx::prime_field(13).unwrap(), 4, PfisterConvention::Standard).unwrap())
    });
    group.bench_function("triangle/R/n<=4", |b| b.iter(|| triangle_check(FieldCtx::RealQ, 4, PfisterConvention::Standard).unwrap()));
    group.finish();
}

criterion_group!(benches, diagonalize, cancellation, decomposition, hilbert, rings);
criterion_main!(benches);
