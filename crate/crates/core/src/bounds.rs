//! Closed-form inequalities the distance-decay walk provably satisfies,
//! evaluated exactly with the chain solvers: the edge-count hitting bound,
//! its localized refinement, and the per-layer decomposition bound behind
//! both.

use crate::chain::{self, ChainError};
use crate::graph::{Graph, VertexSet, UNREACHED};
use crate::weights::{weight_field, WeightedGraph};

/// Exact expected hitting time of the anchor under its weight field, from
/// `start`, paired with the bound `2 e(G) / eps`.
pub fn hitting_edge_bound(
    graph: &Graph,
    anchor: &VertexSet,
    eps: f64,
    start: u32,
) -> Result<(f64, f64), ChainError> {
    let wg = weight_field(graph, anchor, eps)?;
    let sol = chain::hitting_times(&wg, anchor)?;
    Ok((
        sol.values[start as usize],
        2.0 * graph.edge_count() as f64 / eps,
    ))
}

/// Localized refinement: vertices much farther from the anchor than the
/// start barely matter, so the bound shrinks to
/// `2 (e(G[W]) + 1) / eps` where W keeps only vertices within
/// `dist(start) + 2 log_(1/(1-eps)) n` of the anchor.
pub fn hitting_localized_bound(
    graph: &Graph,
    anchor: &VertexSet,
    eps: f64,
    start: u32,
) -> Result<(f64, f64), ChainError> {
    let wg = weight_field(graph, anchor, eps)?;
    let sol = chain::hitting_times(&wg, anchor)?;
    let dist = graph.distances_from(anchor)?;
    let n = graph.vertex_count() as f64;
    let horizon = dist[start as usize] as f64 + 2.0 * n.ln() / (1.0 / (1.0 - eps)).ln();
    let keep: VertexSet = VertexSet::from_iter(
        graph.vertex_count(),
        graph
            .vertices()
            .filter(|&w| (dist[w as usize] as f64) <= horizon),
    );
    let kept_edges = graph
        .edges()
        .filter(|&(u, v)| keep.contains(u) && keep.contains(v))
        .count();
    Ok((
        sol.values[start as usize],
        2.0 * (kept_edges as f64 + 1.0) / eps,
    ))
}

/// Worst decayed ball-growth sum `max_v sum_k |B^k(v)| (1-eps)^k`, computed
/// exactly: the finite part up to each eccentricity plus the saturated
/// geometric tail.
pub fn growth_decay_sum(graph: &Graph, eps: f64) -> f64 {
    let n = graph.vertex_count() as f64;
    let decay = 1.0 - eps;
    let mut worst = 0.0f64;
    for v in graph.vertices() {
        let dist = graph.distances_from_vertex(v, None);
        let ecc = dist.iter().copied().max().unwrap_or(0) as usize;
        let mut sphere = vec![0.0f64; ecc + 1];
        for &d in &dist {
            sphere[d as usize] += 1.0;
        }
        let mut total = 0.0;
        let mut ball = 0.0;
        for (k, s) in sphere.iter().enumerate() {
            ball += s;
            total += ball * decay.powi(k as i32);
        }
        total += n * decay.powi(ecc as i32 + 1) / eps;
        worst = worst.max(total);
    }
    worst
}

/// One layer of the distance decomposition around an anchor set.
#[derive(Debug, Clone)]
pub struct LayerBound {
    pub layer: u32,
    /// exact worst hitting time of the previous layer from this one, in the
    /// layer subchain
    pub max_hitting: f64,
    /// twice the subchain's total edge weight
    pub weight_sum: f64,
}

/// The decomposition bound: for each distance layer i >= 1, the walk from
/// layer i to layer i-1 inside the outward subgraph (layers >= i-1 with the
/// edges inside layer i-1 removed) takes at most twice the subgraph's total
/// decayed edge weight, in expectation, from anywhere in layer i.
pub fn layer_hitting_bounds(
    graph: &Graph,
    anchor: &VertexSet,
    eps: f64,
) -> Result<Vec<LayerBound>, ChainError> {
    let n = graph.vertex_count();
    let dist = graph.distances_from(anchor)?;
    let deepest = dist
        .iter()
        .filter(|&&d| d != UNREACHED)
        .copied()
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    for layer in 1..=deepest {
        // vertices of layers >= layer-1, re-indexed densely
        let keep: Vec<u32> = graph
            .vertices()
            .filter(|&v| dist[v as usize] + 1 >= layer)
            .collect();
        let mut local = vec![u32::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let inner = |v: u32| dist[v as usize] + 1 == layer;
        let edges: Vec<(u32, u32)> = graph
            .edges()
            .filter(|&(u, v)| {
                local[u as usize] != u32::MAX
                    && local[v as usize] != u32::MAX
                    && !(inner(u) && inner(v))
            })
            .map(|(u, v)| (local[u as usize], local[v as usize]))
            .collect();
        let sub = Graph::from_edges(keep.len(), &edges)?;
        // decayed weights relative to the previous layer: every kept vertex
        // at global distance d sits at distance d - (layer-1) from it
        let decay = 1.0 - eps;
        let rel = |v: u32| dist[keep[v as usize] as usize] - (layer - 1);
        let wg = WeightedGraph::from_fn(sub.clone(), |u, v| {
            decay.powi(rel(u).min(rel(v)) as i32)
        })
        .expect("decay weights are positive");
        let weight_sum = 2.0 * wg.total_edge_weight();
        let target = VertexSet::from_iter(keep.len(), (0..keep.len() as u32).filter(|&v| rel(v) == 0));
        let sol = chain::hitting_times(&wg, &target)?;
        let max_hitting = (0..keep.len() as u32)
            .filter(|&v| rel(v) == 1)
            .map(|v| sol.values[v as usize])
            .fold(0.0f64, f64::max);
        out.push(LayerBound {
            layer,
            max_hitting,
            weight_sum,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn edge_bound_on_small_graphs() {
        let g = generators::grid(3, 4).unwrap();
        let anchor = VertexSet::from_iter(12, [0]);
        for &eps in &[0.1, 0.5, 0.9] {
            for v in g.vertices() {
                let (lhs, rhs) = hitting_edge_bound(&g, &anchor, eps, v).unwrap();
                assert!(lhs <= rhs, "eps={eps} v={v}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn localized_bound_on_long_paths() {
        // far-away edges do not contribute: the localized bound on a long
        // path is much smaller than the edge bound
        let g = generators::path(60).unwrap();
        let anchor = VertexSet::from_iter(60, [0]);
        let eps = 0.5;
        let (lhs, rhs) = hitting_localized_bound(&g, &anchor, eps, 3).unwrap();
        assert!(lhs <= rhs);
        let (_, global) = hitting_edge_bound(&g, &anchor, eps, 3).unwrap();
        assert!(rhs < global);
    }

    #[test]
    fn layer_bounds_on_random_graphs() {
        let mut rng = crate::rng::stream(0xA11CE, 0);
        for trial in 0..12 {
            let g = crate::corpus::random_connected(6 + trial, trial % 7, &mut rng);
            let n = g.vertex_count();
            let anchor = VertexSet::from_iter(n, [trial as u32 % n as u32]);
            for &eps in &[0.1, 0.5] {
                for check in layer_hitting_bounds(&g, &anchor, eps).unwrap() {
                    assert!(
                        check.max_hitting <= check.weight_sum + 1e-9,
                        "layer {}: {} > {}",
                        check.layer,
                        check.max_hitting,
                        check.weight_sum
                    );
                }
            }
        }
    }

    #[test]
    fn layer_bounds_cover_every_layer() {
        let g = generators::path(7).unwrap();
        let anchor = VertexSet::from_iter(7, [0]);
        let checks = layer_hitting_bounds(&g, &anchor, 0.3).unwrap();
        assert_eq!(checks.len(), 6);
        assert_eq!(checks[0].layer, 1);
    }
}
