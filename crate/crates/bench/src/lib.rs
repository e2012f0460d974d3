//! Benchmark-only crate; see `benches/core_ops.rs`. Re-exports fixture
//! builders shared by the benchmarks.

use tbrw_core::generators;
use tbrw_core::Graph;

pub fn medium_grid() -> Graph {
    generators::grid(32, 32).unwrap()
}

pub fn long_cycle() -> Graph {
    generators::cycle(1024).unwrap()
}

pub fn regular_graph(n: usize, d: usize, seed: u64) -> Graph {
    let mut rng = tbrw_core::rng::stream(seed, 0);
    generators::random_regular_connected(n, d, &mut rng).unwrap()
}
