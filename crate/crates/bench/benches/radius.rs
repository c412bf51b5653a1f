use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use numlab::numrange::{
    radius_exact_polytope, radius_hilbert, radius_limit_formula, radius_lower_sampling, AlphaSchedule,
};
use numlab_bench::operators;

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("radius_exact_polytope");
    for e in ["linf(3)", "hexquot", "polygon(6)", "xtrunc(1)"] {
        let ops = operators(e, 16, 1);
        g.bench_with_input(BenchmarkId::from_parameter(e), &ops, |b, ops| {
            b.iter(|| {
                ops.iter()
                    .map(|t| radius_exact_polytope(black_box(t)).unwrap().value)
                    .sum::<f64>()
            })
        });
    }
    g.finish();
}

fn engines(c: &mut Criterion) {
    let schedule = AlphaSchedule::default();
    let hex = &operators("hexquot", 1, 2)[0];
    c.bench_function("radius_limit_formula/hexquot", |b| {
        b.iter(|| radius_limit_formula(black_box(hex), &schedule).unwrap())
    });
    c.bench_function("radius_lower_sampling/hexquot/256", |b| {
        b.iter(|| radius_lower_sampling(black_box(hex), 256, 7).unwrap())
    });
    let h = &operators("hilbert(3, complex)", 1, 3)[0];
    c.bench_function("radius_hilbert/hilbert(3, complex)", |b| {
        b.iter(|| radius_hilbert(black_box(h)).unwrap())
    });
}

criterion_group!(benches, exact, engines);
criterion_main!(benches);
