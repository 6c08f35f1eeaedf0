use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pebble_constructions::{binary_tree, pyramid, road};
use pebble_solvers::{price, price_many, set_parallel, Goal, PriceQuery};

fn frontier_expansion(c: &mut Criterion) {
    let cases = [("pyramid4", pyramid(4)), ("tree3", binary_tree(3)), ("road2x8", road(2, 8).unwrap())];
    let q = PriceQuery::reversible(Goal::Persistent);
    let mut group = c.benchmark_group("bfs");
    group.sample_size(10);
    for (name, g) in &cases {
        for (mode, on) in [("sequential", false), ("parallel", true)] {
            group.bench_with_input(BenchmarkId::new(mode, name), &g.graph, |b, d| {
                set_parallel(on);
                b.iter(|| price(black_box(d), &q).unwrap())
            });
        }
    }
    group.finish();
}

fn corpus_sweep(c: &mut Criterion) {
    let graphs: Vec<_> = (0..5).map(pyramid).chain((0..4).map(binary_tree)).collect();
    let q = PriceQuery::reversible(Goal::Persistent);
    let jobs: Vec<_> = graphs.iter().map(|g| (&g.graph, &q)).collect();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (mode, on) in [("sequential", false), ("parallel", true)] {
        group.bench_function(mode, |b| {
            set_parallel(on);
            b.iter(|| price_many(black_box(&jobs)))
        });
    }
    group.finish();
}

criterion_group!(benches, frontier_expansion, corpus_sweep);
criterion_main!(benches);
