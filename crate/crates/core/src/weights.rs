//! Positive edge weights over a host graph, and the distance-decay weight
//! field whose reversible walk the biased-walk controller emulates.

use crate::graph::{Graph, GraphError, VertexSet};

/// A graph with one positive weight per edge. The reversible random walk on
/// it moves from `v` along edge `e` with probability `w(e) / strength(v)`.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    graph: Graph,
    // aligned with the host adjacency lists
    weights: Vec<Vec<f64>>,
    strength: Vec<f64>,
    total_edge_weight: f64,
}

impl WeightedGraph {
    /// Builds from a per-edge weight function over canonical edges (u < v).
    pub fn from_fn(
        graph: Graph,
        mut weight: impl FnMut(u32, u32) -> f64,
    ) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        let mut weights: Vec<Vec<f64>> = (0..n)
            .map(|v| vec![0.0; graph.degree(v as u32)])
            .collect();
        let mut strength = vec![0.0; n];
        let mut total = 0.0;
        for (u, v) in graph.edges() {
            let w = weight(u, v);
            assert!(
                w > 0.0 && w.is_finite(),
                "edge weight must be positive and finite, got {w} on {u}-{v}"
            );
            let iu = graph.edge_index(u, v).unwrap();
            let iv = graph.edge_index(v, u).unwrap();
            weights[u as usize][iu] = w;
            weights[v as usize][iv] = w;
            strength[u as usize] += w;
            strength[v as usize] += w;
            total += w;
        }
        Ok(WeightedGraph {
            graph,
            weights,
            strength,
            total_edge_weight: total,
        })
    }

    /// Unit weights: the simple random walk.
    pub fn uniform(graph: Graph) -> Self {
        Self::from_fn(graph, |_, _| 1.0).expect("unit weights are valid")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn weight(&self, u: u32, v: u32) -> Option<f64> {
        let idx = self.graph.edge_index(u, v)?;
        Some(self.weights[u as usize][idx])
    }

    /// Weights aligned with `graph().neighbors(v)`.
    pub fn incident_weights(&self, v: u32) -> &[f64] {
        &self.weights[v as usize]
    }

    pub fn strength(&self, v: u32) -> f64 {
        self.strength[v as usize]
    }

    /// Sum of all edge weights (each edge counted once).
    pub fn total_edge_weight(&self) -> f64 {
        self.total_edge_weight
    }

    /// One-step transition probability of the reversible walk.
    pub fn transition(&self, u: u32, v: u32) -> f64 {
        match self.weight(u, v) {
            Some(w) => w / self.strength(u),
            None => 0.0,
        }
    }

    /// Transition distribution at `v`, aligned with the neighbor list.
    pub fn transition_row(&self, v: u32) -> Vec<f64> {
        let s = self.strength(v);
        self.weights[v as usize].iter().map(|w| w / s).collect()
    }

    /// Canonical edges with their weights.
    pub fn edge_weights(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.graph
            .edges()
            .map(|(u, v)| ((u, v), self.weight(u, v).unwrap()))
    }

    /// Fingerprint of (graph, weights), for solver caches.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.graph.fingerprint().hash(&mut h);
        for row in &self.weights {
            for w in row {
                w.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }
}

/// Edge weights `(1 - eps)^{dist(e, anchor)}` where the distance of an edge
/// to the anchor set is the smaller of its two endpoint distances. Edges
/// incident to the anchor get weight exactly 1.
pub fn weight_field(
    graph: &Graph,
    anchor: &VertexSet,
    eps: f64,
) -> Result<WeightedGraph, GraphError> {
    if !(0.0..1.0).contains(&eps) {
        return Err(GraphError::BadEps(eps));
    }
    if !graph.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let dist = graph.distances_from(anchor)?;
    let decay = 1.0 - eps;
    WeightedGraph::from_fn(graph.clone(), |u, v| {
        let d = dist[u as usize].min(dist[v as usize]);
        decay.powi(d as i32)
    })
}
