//! Deterministic graph corpora for the bound-verification suites: a desk-size
//! collection spanning all generator families, a medium collection for cover
//! construction runs, and helpers for random connected and weighted graphs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::generators;
use crate::graph::Graph;
use crate::rng;
use crate::weights::WeightedGraph;

pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
}

/// Random connected graph: spanning tree plus extra edges.
pub fn random_connected(n: usize, extra_edges: usize, rng: &mut ChaCha8Rng) -> Graph {
    generators::random_connected(n, extra_edges, rng)
}

/// Random positive edge weights in [0.1, 2.5].
pub fn random_weights(graph: Graph, rng: &mut ChaCha8Rng) -> WeightedGraph {
    let weights: std::collections::HashMap<(u32, u32), f64> = graph
        .edges()
        .map(|e| (e, rng.gen_range(0.1..2.5)))
        .collect();
    WeightedGraph::from_fn(graph, |u, v| weights[&(u, v)]).expect("positive weights")
}

/// One hundred graphs on at most 25 vertices: paths, grids, random regular
/// graphs, cycles, layered graphs, and the small bipartite Cayley graph.
pub fn small_corpus(seed: u64) -> Vec<CorpusGraph> {
    let mut out = Vec::new();
    let mut push = |name: String, graph: Graph| {
        debug_assert!(graph.vertex_count() <= 25, "{name} too large");
        debug_assert!(graph.is_connected(), "{name} disconnected");
        out.push(CorpusGraph { name, graph });
    };
    for n in 2..=21 {
        push(format!("path-{n}"), generators::path(n).unwrap());
    }
    let mut grids = 0;
    'grid: for r in 2..=5usize {
        for c in r..=12usize {
            if r * c > 25 {
                continue;
            }
            push(format!("grid-{r}x{c}"), generators::grid(r, c).unwrap());
            grids += 1;
            if grids == 20 {
                break 'grid;
            }
        }
    }
    let mut stream = rng::stream(seed, 0);
    let regular_params = [
        (5, 2),
        (8, 3),
        (10, 3),
        (12, 3),
        (14, 3),
        (16, 3),
        (18, 3),
        (20, 3),
        (22, 3),
        (24, 3),
        (10, 4),
        (12, 4),
        (15, 4),
        (18, 4),
        (21, 4),
        (24, 4),
        (12, 5),
        (16, 5),
        (20, 5),
        (24, 5),
        (12, 6),
        (18, 6),
        (24, 6),
        (25, 4),
    ];
    for (i, &(n, d)) in regular_params.iter().enumerate() {
        let g = generators::random_regular_connected(n, d, &mut stream)
            .unwrap_or_else(|e| panic!("regular {n},{d}: {e}"));
        push(format!("regular-{n}-{d}-{i}"), g);
    }
    for n in 6..=25 {
        push(format!("layered-{n}"), generators::layered(n).unwrap().0);
    }
    push(
        "cayley2-p3".into(),
        generators::affine_cayley_radius2(3).unwrap().graph,
    );
    for i in 0..15 {
        let n = 5 + (i * 17 + 3) % 21;
        let extra = (i * 7) % 12;
        push(
            format!("random-{n}-{i}"),
            random_connected(n, extra, &mut stream),
        );
    }
    assert_eq!(out.len(), 100);
    out
}

/// Twenty graphs up to 4096 vertices for cover-construction runs.
pub fn medium_corpus(seed: u64) -> Vec<CorpusGraph> {
    let mut stream = rng::stream(seed, 1);
    let mut out = Vec::new();
    let mut push = |name: &str, graph: Graph| {
        debug_assert!(graph.is_connected(), "{name} disconnected");
        out.push(CorpusGraph {
            name: name.to_string(),
            graph,
        });
    };
    push("cycle-256", generators::cycle(256).unwrap());
    push("cycle-1024", generators::cycle(1024).unwrap());
    push("cycle-4096", generators::cycle(4096).unwrap());
    push("grid-16x16", generators::grid(16, 16).unwrap());
    push("grid-32x32", generators::grid(32, 32).unwrap());
    push("grid-64x64", generators::grid(64, 64).unwrap());
    push(
        "regular3-256",
        generators::random_regular_connected(256, 3, &mut stream).unwrap(),
    );
    push(
        "regular3-1024",
        generators::random_regular_connected(1024, 3, &mut stream).unwrap(),
    );
    push(
        "regular3-4096",
        generators::random_regular_connected(4096, 3, &mut stream).unwrap(),
    );
    push(
        "regular4-512",
        generators::random_regular_connected(512, 4, &mut stream).unwrap(),
    );
    push(
        "regular4-2048",
        generators::random_regular_connected(2048, 4, &mut stream).unwrap(),
    );
    push("tree-1023", generators::binary_tree(1023).unwrap());
    push("tree-4095", generators::binary_tree(4095).unwrap());
    push("layered-126", generators::layered(126).unwrap().0);
    push("layered-510", generators::layered(510).unwrap().0);
    push(
        "cayley2-p7",
        generators::affine_cayley_radius2(7).unwrap().graph,
    );
    push(
        "cayley2-p13",
        generators::affine_cayley_radius2(13).unwrap().graph,
    );
    push(
        "cayley3-p5",
        generators::affine_cayley_radius3(5).unwrap().graph,
    );
    push("complete-64", generators::complete(64).unwrap());
    push("random-2000", random_connected(2000, 4000, &mut stream));
    assert_eq!(out.len(), 20);
    out
}
