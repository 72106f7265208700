use std::hint::black_box;

use avoidance::constructions::enumerate_fk;
use avoidance::density::{m, m2_bar};
use avoidance::game::{play, GameConfig, StrategySpec};
use avoidance::regularity::{check_regular_pair, BipartitePair, CheckMode};
use avoidance::verifier::check_density_chain;
use avoidance::Graph;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn densities(c: &mut Criterion) {
    let mut g = c.benchmark_group("density");
    for (name, f) in [
        ("K4", Graph::complete(4)),
        ("C5", Graph::cycle(5)),
        ("K6", Graph::complete(6)),
    ] {
        g.bench_with_input(BenchmarkId::new("mbar2_r4", name), &f, |b, f| {
            b.iter(|| m2_bar(black_box(f), 4).unwrap())
        });
    }
    // past the exhaustive limit, so `m` goes through the flow route
    let big = Graph::cycle(9)
        .disjoint_union(&Graph::complete(7))
        .disjoint_union(&Graph::cycle(9));
    g.bench_function("m_flow_v25", |b| b.iter(|| m(black_box(&big)).unwrap()));
    g.finish();
}

fn constructions(c: &mut Criterion) {
    let k3 = Graph::complete(3);
    c.bench_function("fk3_K3", |b| {
        b.iter(|| enumerate_fk(black_box(&k3), (0, 1), 3).unwrap())
    });
}

fn games(c: &mut Criterion) {
    let mut g = c.benchmark_group("game");
    g.sample_size(20);
    for n in [128usize, 512] {
        for strategy in [StrategySpec::greedy(), StrategySpec::Random] {
            let mut cfg = GameConfig::new(n, Graph::complete(3), 2, 7);
            let label = match &strategy {
                StrategySpec::Random => "random",
                _ => "greedy",
            };
            cfg.strategy = strategy;
            g.bench_with_input(BenchmarkId::new(format!("K3_r2_{label}"), n), &cfg, |b, cfg| {
                b.iter(|| play(black_box(cfg)).unwrap())
            });
        }
    }
    g.finish();
}

fn regularity(c: &mut Criterion) {
    let edges = (0..12).flat_map(|u| (0..12).filter(move |w| (u * 7 + w * 3) % 5 < 2).map(move |w| (u, w)));
    let pair = BipartitePair::new(12, 12, edges).unwrap();
    let p = pair.density();
    c.bench_function("regular_pair_exact_12x12", |b| {
        b.iter(|| check_regular_pair(black_box(&pair), 0.3, p, CheckMode::Exact).unwrap())
    });
}

fn verifier(c: &mut Criterion) {
    let mut g = c.benchmark_group("verifier");
    g.sample_size(10);
    g.bench_function("chain_v6_r4", |b| b.iter(|| check_density_chain(6, 4).unwrap()));
    g.finish();
}

criterion_group!(benches, densities, constructions, games, regularity, verifier);
criterion_main!(benches);
