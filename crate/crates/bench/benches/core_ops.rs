use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tbrw_bench::{long_cycle, medium_grid, regular_graph};
use tbrw_core::chain;
use tbrw_core::cover::build_random_cover;
use tbrw_core::explore::{build_plan, choose_power_exponent, run_exploration};
use tbrw_core::strategies::TowardSetBias;
use tbrw_core::walk::{run_walk, WalkGoal};
use tbrw_core::weights::weight_field;
use tbrw_core::VertexSet;

fn bench_bfs(c: &mut Criterion) {
    let grid = medium_grid();
    let sources = VertexSet::from_iter(1024, [0]);
    c.bench_function("bfs/grid-32x32", |b| {
        b.iter(|| grid.distances_from(&sources).unwrap())
    });
}

fn bench_power(c: &mut Criterion) {
    let cycle = long_cycle();
    c.bench_function("power/cycle-1024-k16", |b| b.iter(|| cycle.power(16).unwrap()));
}

fn bench_cover(c: &mut Criterion) {
    let mut group = c.benchmark_group("cover-build");
    group.sample_size(20);
    for (name, g) in [
        ("cycle-1024", long_cycle()),
        ("regular3-1024", regular_graph(1024, 3, 5)),
    ] {
        group.bench_with_input(BenchmarkId::new("levels3", name), &g, |b, g| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                build_random_cover(g, 3, seed, 100).unwrap()
            });
        });
    }
    group.finish();
}

fn bench_walk(c: &mut Criterion) {
    let grid = medium_grid();
    let anchor = VertexSet::from_iter(1024, [0]);
    let strat = TowardSetBias::new(&grid, &anchor, 0.5);
    c.bench_function("walk/hit-anchor-grid-32x32", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            let mut phi = tbrw_core::strategies::BiasStrategy::clone_strategy(&strat);
            run_walk(
                &grid,
                0.5,
                phi.as_mut(),
                1023,
                WalkGoal::Hit(&anchor),
                1 << 24,
                false,
                (seed, 0),
            )
        });
    });
}

fn bench_hitting_solve(c: &mut Criterion) {
    let g = tbrw_core::generators::path(500).unwrap();
    let anchor = VertexSet::from_iter(500, [0]);
    let wg = weight_field(&g, &anchor, 0.3).unwrap();
    c.bench_function("solve/hitting-path-500", |b| {
        b.iter(|| chain::hitting_times(&wg, &anchor).unwrap())
    });
}

fn bench_exploration(c: &mut Criterion) {
    let g = long_cycle();
    let eps = 0.5;
    let k = choose_power_exponent(eps, 1024).unwrap();
    let power = g.power(k as i64).unwrap();
    let cover = build_random_cover(&power, tbrw_core::cover::sqrtlog_levels(1024), 11, 100).unwrap();
    let plan = build_plan(&g, eps, 0, &cover).unwrap();
    let mut group = c.benchmark_group("exploration");
    group.sample_size(10);
    group.bench_function("cycle-1024-one-run", |b| {
        let mut trial = 0u64;
        b.iter(|| {
            trial += 1;
            run_exploration(&plan, &g, (3, trial), u64::MAX).unwrap()
        });
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_bfs,
    bench_power,
    bench_cover,
    bench_walk,
    bench_hitting_solve,
    bench_exploration
);
criterion_main!(benches);
