use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use numlab::numindex::index_oracle_2d;
use numlab::{index_search_upper, SearchConfig};
use numlab_bench::space;

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("index_search_upper");
    g.sample_size(10);
    for e in ["hexquot", "hilbert(2, complex)"] {
        let s = space(e);
        let cfg = SearchConfig {
            starts: 16,
            ..SearchConfig::for_space(&s, 1)
        };
        g.bench_function(e, |b| b.iter(|| index_search_upper(black_box(&s), &cfg).unwrap().upper));
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("index_oracle_2d");
    g.sample_size(10);
    let s = space("polygon(5)");
    g.bench_function("polygon(5)/2e4", |b| {
        b.iter(|| index_oracle_2d(black_box(&s), 20_000).unwrap().value)
    });
    g.finish();
}

criterion_group!(benches, search, oracle);
criterion_main!(benches);
