use criterion::{criterion_group, criterion_main, Criterion};
use nonneg3_core::boundary::{compute_f63, det_d, generators, mu_pullback, base_sextic_f};
use nonneg3_core::groebner::{buchberger, is_groebner_basis, Options};
use nonneg3_core::poly::divide_exact;
use nonneg3_core::MonomialOrder;
use nonneg3_bench::positive_rank3;
use std::hint::black_box;

fn pullback(c: &mut Criterion) {
    c.bench_function("pullback_and_divide", |b| {
        b.iter(|| {
            let p = mu_pullback(black_box(base_sextic_f()), 4, 3).unwrap();
            divide_exact(&p, &det_d()).unwrap()
        })
    });
    let f63 = compute_f63();
    c.bench_function("f63_square", |b| b.iter(|| black_box(f63) * black_box(f63)));
}

fn groebner(c: &mut Criterion) {
    let gens = generators(4, 4).unwrap().all();
    let order = MonomialOrder::Grevlex;
    let mut g = c.benchmark_group("groebner_4x4");
    g.sample_size(10);
    g.bench_function("criterion_check", |b| b.iter(|| is_groebner_basis(black_box(&gens), &order, &Options::default())));
    g.bench_function("buchberger", |b| b.iter(|| buchberger(black_box(&gens), &order, &Options::default())));
    g.finish();
}

fn linear_algebra(c: &mut Criterion) {
    let m = positive_rank3(12, 12, 3);
    c.bench_function("rank_12x12", |b| b.iter(|| black_box(&m).rank()));
}

criterion_group!(benches, pullback, groebner, linear_algebra);
criterion_main!(benches);
