//! Graph families: standard test graphs, random regular graphs, the layered
//! lower-bound construction, and bipartite Cayley graphs over affine maps of
//! a prime field.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("invalid size parameter: {0}")]
    BadSize(String),
    #[error("n*d must be even for a d-regular graph (n={0}, d={1})")]
    InfeasibleRegular(usize, usize),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn path(n: usize) -> Result<Graph, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::BadSize("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect();
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn cycle(n: usize) -> Result<Graph, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::BadSize("cycle needs n >= 3".into()));
    }
    let mut edges: Vec<_> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n as u32 - 1));
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn grid(rows: usize, cols: usize) -> Result<Graph, GeneratorError> {
    if rows == 0 || cols == 0 {
        return Err(GeneratorError::BadSize("grid needs positive sides".into()));
    }
    let at = |r: usize, c: usize| (r * cols + c) as u32;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((at(r, c), at(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
    }
    Ok(Graph::from_edges(rows * cols, &edges)?)
}

pub fn complete(n: usize) -> Result<Graph, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::BadSize("complete graph needs n >= 1".into()));
    }
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            edges.push((u, v));
        }
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Complete binary tree shape on n vertices: children of i are 2i+1, 2i+2.
pub fn binary_tree(n: usize) -> Result<Graph, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::BadSize("tree needs n >= 1".into()));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for child in [2 * i + 1, 2 * i + 2] {
            if child < n {
                edges.push((i as u32, child as u32));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Random d-regular graph via the pairing model, rejecting pairings with
/// loops or repeated edges until a simple one appears.
pub fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph, GeneratorError> {
    if !(n * d).is_multiple_of(2) {
        return Err(GeneratorError::InfeasibleRegular(n, d));
    }
    if d >= n {
        return Err(GeneratorError::BadSize(format!("degree {d} needs n > d, got n={n}")));
    }
    if d == 0 {
        return Ok(Graph::from_edges(n.max(1), &[])?);
    }
    let mut stubs: Vec<u32> = (0..n as u32)
        .flat_map(|v| std::iter::repeat_n(v, d))
        .collect();
    'retry: loop {
        stubs.shuffle(rng);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'retry;
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue 'retry;
        }
        return Ok(Graph::from_edges(n, &edges)?);
    }
}

/// As `random_regular`, retrying whole samples until the graph is connected.
pub fn random_regular_connected(
    n: usize,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Graph, GeneratorError> {
    loop {
        let g = random_regular(n, d, rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
}

/// The layered lower-bound graph: consecutive layers of sizes 2, 4, 8, ...
/// joined completely, with the last layer enlarged to reach n vertices.
/// Returns the graph and the 1-based layer index of each vertex.
pub fn layered(n: usize) -> Result<(Graph, Vec<u32>), GeneratorError> {
    if n < 6 {
        return Err(GeneratorError::BadSize("layered graph needs n >= 6".into()));
    }
    // k with 2^k - 2 <= n < 2^(k+1) - 2
    let mut k = 3usize;
    while (1usize << (k + 1)) - 2 <= n {
        k += 1;
    }
    debug_assert!((1usize << k) - 2 <= n);
    let mut sizes: Vec<usize> = (1..k).map(|i| 1usize << i).collect();
    let deficit = n - ((1usize << k) - 2);
    *sizes.last_mut().unwrap() += deficit;

    let mut layer_of = Vec::with_capacity(n);
    let mut layer_ranges = Vec::new();
    let mut next = 0u32;
    for (idx, &size) in sizes.iter().enumerate() {
        let start = next;
        next += size as u32;
        layer_ranges.push(start..next);
        layer_of.extend(std::iter::repeat_n(idx as u32 + 1, size));
    }
    let mut edges = Vec::new();
    for pair in layer_ranges.windows(2) {
        for u in pair[0].clone() {
            for v in pair[1].clone() {
                edges.push((u, v));
            }
        }
    }
    Ok((Graph::from_edges(n, &edges)?, layer_of))
}

/// Which half of the bipartition a Cayley-graph vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    X,
    Y,
}

/// Bipartite Cayley graph over a group of affine maps, together with the
/// bipartition labels and the field prime.
#[derive(Debug, Clone)]
pub struct AffineCayleyGraph {
    pub graph: Graph,
    pub part_of: Vec<Part>,
    pub p: u64,
    pub variant: CayleyVariant,
    /// printable element label per vertex
    pub element_labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CayleyVariant {
    /// group of maps x -> a*x + u; generator set pairs each slope with
    /// translations {0, 1}; vertex degree 2(p-1)
    Radius2,
    /// pairs of maps sharing a slope; translations range over three corner
    /// vectors; vertex degree 3(p-1)
    Radius3,
}

fn check_odd_prime(p: u64) -> Result<(), GeneratorError> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(GeneratorError::NotOddPrime(p));
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return Err(GeneratorError::NotOddPrime(p));
        }
        d += 2;
    }
    Ok(())
}

/// Bipartite Cayley graph on the affine group of F_p. `X` vertices come
/// first (ids `0..p(p-1)`), then `Y`. Group element (slope a, shift u) with
/// a in 1..p, u in 0..p has local index (a-1)*p + u.
pub fn affine_cayley_radius2(p: u64) -> Result<AffineCayleyGraph, GeneratorError> {
    check_odd_prime(p)?;
    let group_size = (p * (p - 1)) as usize;
    let n = 2 * group_size;
    let idx = |slope: u64, shift: u64| ((slope - 1) * p + shift) as u32;

    // (s h) f where h ranges over slopes and s over shifts {0, 1}:
    // composing shift-then-scale-then-shift gives (a*c mod p, a*w + b mod p)
    let mut edges = Vec::with_capacity(group_size * 2 * (p as usize - 1));
    for slope_f in 1..p {
        for shift_f in 0..p {
            let f = idx(slope_f, shift_f);
            for slope_h in 1..p {
                for b in [0u64, 1] {
                    let slope = slope_h * slope_f % p;
                    let shift = (slope_h * shift_f + b) % p;
                    let y = group_size as u32 + idx(slope, shift);
                    edges.push((f, y));
                }
            }
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    let mut part_of = vec![Part::X; group_size];
    part_of.extend(vec![Part::Y; group_size]);
    let mut element_labels = Vec::with_capacity(n);
    for part in ["X", "Y"] {
        for slope in 1..p {
            for shift in 0..p {
                element_labels.push(format!("{part}:{slope}x+{shift}"));
            }
        }
    }
    Ok(AffineCayleyGraph {
        graph,
        part_of,
        p,
        variant: CayleyVariant::Radius2,
        element_labels,
    })
}

/// Bipartite Cayley graph on pairs of affine maps with a common slope.
/// Element (slope a, shifts u1, u2) has local index ((a-1)*p + u1)*p + u2.
pub fn affine_cayley_radius3(p: u64) -> Result<AffineCayleyGraph, GeneratorError> {
    check_odd_prime(p)?;
    let group_size = (p * p * (p - 1)) as usize;
    let n = 2 * group_size;
    let idx = |slope: u64, u1: u64, u2: u64| (((slope - 1) * p + u1) * p + u2) as u32;
    const CORNERS: [(u64, u64); 3] = [(0, 0), (0, 1), (1, 0)];

    let mut edges = Vec::with_capacity(group_size * 3 * (p as usize - 1));
    for slope_f in 1..p {
        for w1 in 0..p {
            for w2 in 0..p {
                let f = idx(slope_f, w1, w2);
                for slope_h in 1..p {
                    for (b1, b2) in CORNERS {
                        let slope = slope_h * slope_f % p;
                        let u1 = (slope_h * w1 + b1) % p;
                        let u2 = (slope_h * w2 + b2) % p;
                        let y = group_size as u32 + idx(slope, u1, u2);
                        edges.push((f, y));
                    }
                }
            }
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    let mut part_of = vec![Part::X; group_size];
    part_of.extend(vec![Part::Y; group_size]);
    let mut element_labels = Vec::with_capacity(n);
    for part in ["X", "Y"] {
        for slope in 1..p {
            for u1 in 0..p {
                for u2 in 0..p {
                    element_labels.push(format!("{part}:({slope}x+{u1},{slope}x+{u2})"));
                }
            }
        }
    }
    Ok(AffineCayleyGraph {
        graph,
        part_of,
        p,
        variant: CayleyVariant::Radius3,
        element_labels,
    })
}

/// Uniform random connected graph scaffold: a random spanning tree plus
/// `extra_edges` additional distinct random edges.
pub fn random_connected(n: usize, extra_edges: usize, rng: &mut ChaCha8Rng) -> Graph {
    assert!(n >= 1);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        edges.push((parent.min(child), parent.max(child)));
    }
    let mut have: std::collections::HashSet<(u32, u32)> = edges.iter().copied().collect();
    let max_edges = n * (n - 1) / 2;
    let target = (edges.len() + extra_edges).min(max_edges);
    while have.len() < target {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if have.insert(e) {
            edges.push(e);
        }
    }
    Graph::from_edges(n, &edges).expect("construction is simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn small_families() {
        assert_eq!(path(3).unwrap().edge_count(), 2);
        assert_eq!(grid(3, 3).unwrap().edge_count(), 12);
        assert_eq!(complete(5).unwrap().edge_count(), 10);
        assert_eq!(cycle(4).unwrap().edge_count(), 4);
        assert_eq!(binary_tree(7).unwrap().edge_count(), 6);
        assert!(binary_tree(7).unwrap().is_connected());
    }

    #[test]
    fn regular_on_four_vertices_is_complete() {
        let mut rng = stream(1, 0);
        let g = random_regular(4, 3, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn regular_degrees() {
        let mut rng = stream(2, 0);
        let g = random_regular(10, 3, &mut rng).unwrap();
        for v in g.vertices() {
            assert_eq!(g.degree(v), 3);
        }
        assert!(random_regular(5, 3, &mut rng).is_err());
    }

    #[test]
    fn regular_connected_retries() {
        let mut rng = stream(3, 0);
        let g = random_regular_connected(100, 4, &mut rng).unwrap();
        assert!(g.is_connected());
        for v in g.vertices() {
            assert_eq!(g.degree(v), 4);
        }
    }

    #[test]
    fn layered_exact_power_case() {
        let (g, layers) = layered(14).unwrap();
        assert_eq!(g.vertex_count(), 14);
        let count = |i: u32| layers.iter().filter(|&&l| l == i).count();
        assert_eq!((count(1), count(2), count(3)), (2, 4, 8));
        // complete joins between consecutive layers only
        let v2 = layers.iter().position(|&l| l == 2).unwrap() as u32;
        assert_eq!(g.degree(v2), 2 + 8);
        for (u, v) in g.edges() {
            let lu = layers[u as usize];
            let lv = layers[v as usize];
            assert_eq!(lu.abs_diff(lv), 1);
        }
    }

    #[test]
    fn layered_enlarges_last_layer() {
        let (g, layers) = layered(20).unwrap();
        assert_eq!(g.vertex_count(), 20);
        let count = |i: u32| layers.iter().filter(|&&l| l == i).count();
        assert_eq!((count(1), count(2), count(3)), (2, 4, 14));
        assert!(layered(5).is_err());
    }

    #[test]
    fn layered_interior_descent_probability() {
        // in the pure powers-of-two case an interior layer has 2^(i-1)
        // neighbors below and 2^(i+1) above, so descent probability 1/5
        let (g, layers) = layered(30).unwrap();
        for v in g.vertices() {
            let l = layers[v as usize];
            if l > 1 && (l as usize) < 4 {
                let below = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| layers[w as usize] == l - 1)
                    .count();
                let total = g.degree(v);
                assert_eq!(below * 5, total);
            }
        }
    }

    #[test]
    fn cayley_radius2_shape() {
        let c = affine_cayley_radius2(3).unwrap();
        assert_eq!(c.graph.vertex_count(), 12);
        for v in c.graph.vertices() {
            assert_eq!(c.graph.degree(v), 4);
        }
        let c5 = affine_cayley_radius2(5).unwrap();
        assert_eq!(c5.graph.vertex_count(), 40);
        for v in c5.graph.vertices() {
            assert_eq!(c5.graph.degree(v), 8);
        }
        assert!(affine_cayley_radius2(9).is_err());
        assert!(affine_cayley_radius2(2).is_err());
    }

    #[test]
    fn cayley_radius3_shape() {
        let c = affine_cayley_radius3(3).unwrap();
        assert_eq!(c.graph.vertex_count(), 36);
        for v in c.graph.vertices() {
            assert_eq!(c.graph.degree(v), 6);
        }
    }

    #[test]
    fn cayley_edges_are_bipartite() {
        let c = affine_cayley_radius2(5).unwrap();
        for (u, v) in c.graph.edges() {
            assert_ne!(c.part_of[u as usize], c.part_of[v as usize]);
        }
    }

    /// Right multiplication by a fixed group element maps edges to edges on
    /// both parts, so neighbor structures are isomorphic across vertices.
    #[test]
    fn cayley_right_translation_preserves_adjacency() {
        let p = 5u64;
        let c = affine_cayley_radius2(p).unwrap();
        let group = (p * (p - 1)) as u32;
        let compose = |a: (u64, u64), b: (u64, u64)| ((a.0 * b.0) % p, (a.0 * b.1 + a.1) % p);
        let unpack = |v: u32| ((v / p as u32) as u64 + 1, (v % p as u32) as u64);
        let pack = |e: (u64, u64)| ((e.0 - 1) * p + e.1) as u32;
        for g_elem in [(2u64, 3u64), (4, 0), (1, 1)] {
            let translate = |v: u32| -> u32 {
                let local = v % group;
                let part = v / group;
                part * group + pack(compose(unpack(local), g_elem))
            };
            for (u, v) in c.graph.edges() {
                assert!(c.graph.has_edge(translate(u), translate(v)));
            }
        }
    }

    #[test]
    fn random_connected_is_connected() {
        let mut rng = stream(4, 0);
        for n in [1usize, 2, 7, 30] {
            let g = random_connected(n, 5, &mut rng);
            assert!(g.is_connected());
            assert_eq!(g.vertex_count(), n);
        }
    }
}
