//! Exact computations on finite reversible chains: stationary distributions,
//! hitting times, effective resistances, the commute identity, the cover-time
//! bound from maximum hitting times, and closed forms for the layered graph.
//!
//! These solvers are the ground truth every simulation is checked against.
//! Systems up to [`DENSE_LIMIT`] unknowns go through a dense LU factorization;
//! larger ones use conjugate gradients on the symmetrized system. Residuals
//! are always computed and returned.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::graph::{GraphError, VertexSet, UNREACHED};
use crate::weights::WeightedGraph;

/// Largest system solved densely; bigger systems use conjugate gradients.
pub const DENSE_LIMIT: usize = 2000;

/// Residual targets for the two solver paths.
const DENSE_RESIDUAL: f64 = 1e-9;
const ITERATIVE_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("target set is empty")]
    EmptyTarget,
    #[error("vertex {0} cannot reach the target set")]
    TargetUnreachable(u32),
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("residual {residual:.3e} exceeds target {target:.3e}")]
    ResidualTooLarge { residual: f64, target: f64 },
    #[error("graph must be connected")]
    Disconnected,
    #[error("layer count must be at least 4, got {0}")]
    BadLayerCount(usize),
}

/// Stationary distribution of the reversible walk: pi(v) proportional to the
/// total weight incident to v.
pub fn stationary(wg: &WeightedGraph) -> Result<Vec<f64>, ChainError> {
    if !wg.graph().is_connected() {
        return Err(ChainError::Disconnected);
    }
    let total = 2.0 * wg.total_edge_weight();
    Ok(wg
        .graph()
        .vertices()
        .map(|v| wg.strength(v) / total)
        .collect())
}

/// A solved hitting-time system: expected steps to reach the target from
/// every vertex (zero on the target itself), plus the solve residual.
#[derive(Debug, Clone)]
pub struct HittingSolution {
    pub values: Vec<f64>,
    pub residual: f64,
}

/// Expected hitting times of `target` for the reversible walk on `wg`,
/// solved exactly. Every vertex must be able to reach the target.
pub fn hitting_times(
    wg: &WeightedGraph,
    target: &VertexSet,
) -> Result<HittingSolution, ChainError> {
    if target.is_empty() {
        return Err(ChainError::EmptyTarget);
    }
    let g = wg.graph();
    let n = g.vertex_count();
    let reach = g.distances_from(target)?;
    if let Some(v) = reach.iter().position(|&d| d == UNREACHED) {
        return Err(ChainError::TargetUnreachable(v as u32));
    }

    // Index the free (non-target) vertices.
    let mut free_index = vec![usize::MAX; n];
    let mut free = Vec::new();
    for v in 0..n as u32 {
        if !target.contains(v) {
            free_index[v as usize] = free.len();
            free.push(v);
        }
    }
    if free.is_empty() {
        return Ok(HittingSolution {
            values: vec![0.0; n],
            residual: 0.0,
        });
    }

    // Symmetrized system: (D - W)_FF h = strength_F, with h = 0 on the target.
    let dim = free.len();
    let rhs: Vec<f64> = free.iter().map(|&v| wg.strength(v)).collect();
    let matvec = |x: &[f64], out: &mut [f64]| {
        for (i, &v) in free.iter().enumerate() {
            let mut acc = wg.strength(v) * x[i];
            for (&w, &wt) in g.neighbors(v).iter().zip(wg.incident_weights(v)) {
                let j = free_index[w as usize];
                if j != usize::MAX {
                    acc -= wt * x[j];
                }
            }
            out[i] = acc;
        }
    };

    let sol = if dim <= DENSE_LIMIT {
        let mut a = DMatrix::zeros(dim, dim);
        for (i, &v) in free.iter().enumerate() {
            a[(i, i)] = wg.strength(v);
            for (&w, &wt) in g.neighbors(v).iter().zip(wg.incident_weights(v)) {
                let j = free_index[w as usize];
                if j != usize::MAX {
                    a[(i, j)] = -wt;
                }
            }
        }
        let b = DVector::from_vec(rhs.clone());
        let lu = a.lu();
        lu.solve(&b)
            .ok_or_else(|| ChainError::SolveFailed("singular hitting system".into()))?
            .as_slice()
            .to_vec()
    } else {
        let diag: Vec<f64> = free.iter().map(|&v| wg.strength(v)).collect();
        conjugate_gradient(dim, &matvec, &diag, &rhs, ITERATIVE_RESIDUAL)?
    };

    let residual = residual_inf(&matvec, &sol, &rhs);
    let target_res = if dim <= DENSE_LIMIT {
        DENSE_RESIDUAL
    } else {
        ITERATIVE_RESIDUAL
    };
    // residual is relative to the rhs scale; hitting values can be large
    let scale = rhs.iter().fold(1.0f64, |m, &b| m.max(b.abs()))
        * sol.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    if residual > target_res * scale {
        return Err(ChainError::ResidualTooLarge {
            residual,
            target: target_res * scale,
        });
    }

    let mut values = vec![0.0; n];
    for (i, &v) in free.iter().enumerate() {
        values[v as usize] = sol[i];
    }
    Ok(HittingSolution { values, residual })
}

/// Expected number of time steps spent in `counted` strictly before hitting
/// `absorbing`, from each start vertex.
pub fn expected_visits(
    wg: &WeightedGraph,
    counted: &VertexSet,
    absorbing: &VertexSet,
) -> Result<Vec<f64>, ChainError> {
    if absorbing.is_empty() {
        return Err(ChainError::EmptyTarget);
    }
    let g = wg.graph();
    let n = g.vertex_count();
    let reach = g.distances_from(absorbing)?;
    if let Some(v) = reach.iter().position(|&d| d == UNREACHED) {
        return Err(ChainError::TargetUnreachable(v as u32));
    }
    let mut free_index = vec![usize::MAX; n];
    let mut free = Vec::new();
    for v in 0..n as u32 {
        if !absorbing.contains(v) {
            free_index[v as usize] = free.len();
            free.push(v);
        }
    }
    if free.is_empty() {
        return Ok(vec![0.0; n]);
    }
    let dim = free.len();
    let rhs: Vec<f64> = free
        .iter()
        .map(|&v| if counted.contains(v) { wg.strength(v) } else { 0.0 })
        .collect();
    let mut a = DMatrix::zeros(dim, dim);
    for (i, &v) in free.iter().enumerate() {
        a[(i, i)] = wg.strength(v);
        for (&w, &wt) in g.neighbors(v).iter().zip(wg.incident_weights(v)) {
            let j = free_index[w as usize];
            if j != usize::MAX {
                a[(i, j)] = -wt;
            }
        }
    }
    let b = DVector::from_vec(rhs);
    let sol = a
        .lu()
        .solve(&b)
        .ok_or_else(|| ChainError::SolveFailed("singular visits system".into()))?;
    let mut values = vec![0.0; n];
    for (i, &v) in free.iter().enumerate() {
        values[v as usize] = sol[i];
    }
    Ok(values)
}

/// Effective resistances on a weighted graph, with conductances equal to the
/// edge weights. Factors the grounded Laplacian once and answers pair
/// queries with back-substitutions.
pub struct ResistanceSolver<'a> {
    wg: &'a WeightedGraph,
    ground: u32,
    index: Vec<usize>,
    vertices: Vec<u32>,
    lu: Option<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
}

impl<'a> ResistanceSolver<'a> {
    pub fn new(wg: &'a WeightedGraph) -> Result<Self, ChainError> {
        if !wg.graph().is_connected() {
            return Err(ChainError::Disconnected);
        }
        let n = wg.graph().vertex_count();
        let ground = 0u32;
        let mut index = vec![usize::MAX; n];
        let mut vertices = Vec::with_capacity(n - 1);
        for v in 1..n as u32 {
            index[v as usize] = vertices.len();
            vertices.push(v);
        }
        let lu = if n - 1 <= DENSE_LIMIT && n > 1 {
            let dim = vertices.len();
            let mut a = DMatrix::zeros(dim, dim);
            for (i, &v) in vertices.iter().enumerate() {
                a[(i, i)] = wg.strength(v);
                for (&w, &wt) in wg.graph().neighbors(v).iter().zip(wg.incident_weights(v)) {
                    let j = index[w as usize];
                    if j != usize::MAX {
                        a[(i, j)] = -wt;
                    }
                }
            }
            Some(a.lu())
        } else {
            None
        };
        Ok(ResistanceSolver {
            wg,
            ground,
            index,
            vertices,
            lu,
        })
    }

    /// Effective resistance between u and v (zero when u = v), and the solve
    /// residual.
    pub fn resistance(&self, u: u32, v: u32) -> Result<(f64, f64), ChainError> {
        if u == v {
            return Ok((0.0, 0.0));
        }
        let dim = self.vertices.len();
        let mut rhs = vec![0.0; dim];
        if u != self.ground {
            rhs[self.index[u as usize]] = 1.0;
        }
        if v != self.ground {
            rhs[self.index[v as usize]] = -1.0;
        }
        let matvec = |x: &[f64], out: &mut [f64]| {
            for (i, &w) in self.vertices.iter().enumerate() {
                let mut acc = self.wg.strength(w) * x[i];
                for (&z, &wt) in self
                    .wg
                    .graph()
                    .neighbors(w)
                    .iter()
                    .zip(self.wg.incident_weights(w))
                {
                    let j = self.index[z as usize];
                    if j != usize::MAX {
                        acc -= wt * x[j];
                    }
                }
                out[i] = acc;
            }
        };
        let sol = match &self.lu {
            Some(lu) => {
                let b = DVector::from_vec(rhs.clone());
                lu.solve(&b)
                    .ok_or_else(|| ChainError::SolveFailed("singular laplacian".into()))?
                    .as_slice()
                    .to_vec()
            }
            None => {
                let diag: Vec<f64> = self.vertices.iter().map(|&v| self.wg.strength(v)).collect();
                conjugate_gradient(dim, &matvec, &diag, &rhs, ITERATIVE_RESIDUAL)?
            }
        };
        let residual = residual_inf(&matvec, &sol, &rhs);
        let scale = 1.0f64.max(sol.iter().fold(0.0f64, |m, &x| m.max(x.abs())));
        if residual > DENSE_RESIDUAL * scale {
            return Err(ChainError::ResidualTooLarge {
                residual,
                target: DENSE_RESIDUAL * scale,
            });
        }
        let potential = |w: u32| {
            if w == self.ground {
                0.0
            } else {
                sol[self.index[w as usize]]
            }
        };
        Ok((potential(u) - potential(v), residual))
    }
}

/// One-off effective resistance between two vertices.
pub fn effective_resistance(wg: &WeightedGraph, u: u32, v: u32) -> Result<f64, ChainError> {
    Ok(ResistanceSolver::new(wg)?.resistance(u, v)?.0)
}

/// Absolute defect of the commute identity
/// `H(u,v) + H(v,u) = R_eff(u,v) * 2 * total edge weight`,
/// with both sides computed by independent solves.
pub fn commute_identity_residual(
    wg: &WeightedGraph,
    u: u32,
    v: u32,
) -> Result<f64, ChainError> {
    let n = wg.graph().vertex_count();
    let to_v = hitting_times(wg, &VertexSet::from_iter(n, [v]))?;
    let to_u = hitting_times(wg, &VertexSet::from_iter(n, [u]))?;
    let reff = effective_resistance(wg, u, v)?;
    let lhs = to_v.values[u as usize] + to_u.values[v as usize];
    let rhs = reff * 2.0 * wg.total_edge_weight();
    Ok((lhs - rhs).abs())
}

/// nth harmonic number.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|j| 1.0 / j as f64).sum()
}

/// Cover-time bound for the walk restricted to `set`: the maximum pairwise
/// hitting time within the set times the harmonic number of its size.
pub fn matthews_bound(wg: &WeightedGraph, set: &VertexSet) -> Result<f64, ChainError> {
    if set.is_empty() {
        return Err(ChainError::EmptyTarget);
    }
    let n = wg.graph().vertex_count();
    let mut max_hit = 0.0f64;
    for v in set.iter() {
        let sol = hitting_times(wg, &VertexSet::from_iter(n, [v]))?;
        for u in set.iter() {
            max_hit = max_hit.max(sol.values[u as usize]);
        }
    }
    Ok(max_hit * harmonic(set.len()))
}

/// Up/down weight ratio of the layer chain induced on the layered graph:
/// `4 - 20*eps / (4*eps + 1)`.
pub fn layered_weight_ratio(eps: f64) -> f64 {
    4.0 - 20.0 * eps / (4.0 * eps + 1.0)
}

/// Stationary-measure ratio between the top and bottom layers of the layer
/// chain, computed from the weighted-path stationary distribution. Equals
/// the (k-3)rd power of the layer weight ratio; the expected number of
/// visits to the top layer before the walk from layer 2 reaches layer 1.
pub fn layered_visit_ratio(eps: f64, layer_count: usize) -> Result<f64, ChainError> {
    if layer_count < 4 {
        return Err(ChainError::BadLayerCount(layer_count));
    }
    let ratio = layered_weight_ratio(eps);
    // path on the layers 1..layer_count-1 with geometric edge weights
    let vertices = layer_count - 1;
    let g = crate::generators::path(vertices)
        .map_err(|_| ChainError::SolveFailed("path generation".into()))?;
    let wg = WeightedGraph::from_fn(g, |u, _| ratio.powi(u as i32))
        .expect("geometric weights are positive");
    let pi = stationary(&wg)?;
    Ok(pi[vertices - 1] / pi[0])
}

/// Thread-safe memo for hitting-time solutions, keyed by the weighted graph
/// and target fingerprints. Concurrent readers share solutions; insertion
/// takes the single writer lock.
#[derive(Default)]
pub struct ChainCache {
    hitting: RwLock<HashMap<(u64, u64), Arc<HittingSolution>>>,
}

impl ChainCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hitting_times(
        &self,
        wg: &WeightedGraph,
        target: &VertexSet,
    ) -> Result<Arc<HittingSolution>, ChainError> {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        target.hash(&mut h);
        let key = (wg.fingerprint(), h.finish());
        if let Some(found) = self.hitting.read().unwrap().get(&key) {
            return Ok(Arc::clone(found));
        }
        let solved = Arc::new(hitting_times(wg, target)?);
        self.hitting
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&solved));
        Ok(solved)
    }
}

fn residual_inf(matvec: &dyn Fn(&[f64], &mut [f64]), x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0; b.len()];
    matvec(x, &mut ax);
    ax.iter()
        .zip(b)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Jacobi-preconditioned conjugate gradients for SPD systems given by a
/// matrix-vector product and the matrix diagonal.
fn conjugate_gradient(
    dim: usize,
    matvec: &dyn Fn(&[f64], &mut [f64]),
    diag: &[f64],
    b: &[f64],
    tol: f64,
) -> Result<Vec<f64>, ChainError> {
    let bnorm = b.iter().fold(0.0f64, |m, &x| m.max(x.abs())).max(1.0);
    let mut x = vec![0.0; dim];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; dim];
    let max_iter = 40 * dim + 1000;
    for _ in 0..max_iter {
        let rmax = r.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if rmax <= tol * bnorm {
            return Ok(x);
        }
        matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(ChainError::SolveFailed("operator not positive definite".into()));
        }
        let alpha = rz / pap;
        for i in 0..dim {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..dim {
            z[i] = r[i] / diag[i];
        }
        let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..dim {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(ChainError::SolveFailed(format!(
        "conjugate gradient stalled after {max_iter} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::Graph;
    use crate::weights::weight_field;

    /// Fixed-point iteration of the one-step equations, as an oracle that is
    /// independent of the factorization path.
    fn hitting_by_value_iteration(wg: &WeightedGraph, target: &VertexSet) -> Vec<f64> {
        let g = wg.graph();
        let n = g.vertex_count();
        let mut h = vec![0.0; n];
        loop {
            let mut next = vec![0.0; n];
            let mut delta = 0.0f64;
            for v in 0..n as u32 {
                if target.contains(v) {
                    continue;
                }
                let mut acc = 1.0;
                for (&w, &wt) in g.neighbors(v).iter().zip(wg.incident_weights(v)) {
                    acc += wt / wg.strength(v) * h[w as usize];
                }
                next[v as usize] = acc;
                delta = delta.max((acc - h[v as usize]).abs());
            }
            h = next;
            if delta < 1e-12 {
                return h;
            }
        }
    }

    #[test]
    fn stationary_examples() {
        let path = generators::path(3).unwrap();
        let wg = WeightedGraph::uniform(path.clone());
        let pi = stationary(&wg).unwrap();
        assert_eq!(pi, vec![0.25, 0.5, 0.25]);

        let weighted = WeightedGraph::from_fn(path, |u, _| if u == 0 { 1.0 } else { 0.5 }).unwrap();
        let pi = stationary(&weighted).unwrap();
        for (got, want) in pi.iter().zip([1.0 / 3.0, 0.5, 1.0 / 6.0]) {
            assert!((got - want).abs() < 1e-15);
        }

        let reg = WeightedGraph::uniform(generators::cycle(8).unwrap());
        for p in stationary(&reg).unwrap() {
            assert!((p - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn stationary_detailed_balance() {
        let mut rng = crate::rng::stream(0x5EED, 0);
        for trial in 0..10 {
            let g = crate::corpus::random_connected(5 + trial, 8, &mut rng);
            let wg = crate::corpus::random_weights(g, &mut rng);
            let pi = stationary(&wg).unwrap();
            assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (u, v) in wg.graph().edges() {
                let lhs = pi[u as usize] * wg.transition(u, v);
                let rhs = pi[v as usize] * wg.transition(v, u);
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hitting_on_path_matches_square_law() {
        let wg = WeightedGraph::uniform(generators::path(3).unwrap());
        let sol = hitting_times(&wg, &VertexSet::from_iter(3, [0])).unwrap();
        assert!((sol.values[2] - 4.0).abs() < 1e-9);
        assert_eq!(sol.values[0], 0.0);
        let oracle = hitting_by_value_iteration(&wg, &VertexSet::from_iter(3, [0]));
        for (a, b) in sol.values.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn hitting_on_triangle() {
        let wg = WeightedGraph::uniform(generators::complete(3).unwrap());
        let sol = hitting_times(&wg, &VertexSet::from_iter(3, [2])).unwrap();
        assert!((sol.values[0] - 2.0).abs() < 1e-9);
        assert!((sol.values[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn hitting_rejects_unreachable_targets() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let wg = WeightedGraph::uniform(g);
        let err = hitting_times(&wg, &VertexSet::from_iter(3, [0])).unwrap_err();
        assert!(matches!(err, ChainError::TargetUnreachable(2)));
        assert!(matches!(
            hitting_times(&wg, &VertexSet::new(3)),
            Err(ChainError::EmptyTarget)
        ));
    }

    #[test]
    fn hitting_matches_value_iteration_on_random_weighted_graphs() {
        let mut rng = crate::rng::stream(0x5EED, 1);
        for trial in 0..8 {
            let g = crate::corpus::random_connected(6 + trial, 10, &mut rng);
            let n = g.vertex_count();
            let wg = crate::corpus::random_weights(g, &mut rng);
            let target = VertexSet::from_iter(n, [0, n as u32 / 2]);
            let sol = hitting_times(&wg, &target).unwrap();
            let oracle = hitting_by_value_iteration(&wg, &target);
            for (a, b) in sol.values.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-6 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn large_system_uses_conjugate_gradient() {
        let n = DENSE_LIMIT + 100;
        let wg = WeightedGraph::uniform(generators::path(n).unwrap());
        let sol = hitting_times(&wg, &VertexSet::from_iter(n, [0])).unwrap();
        let len = (n - 1) as f64;
        assert!((sol.values[n - 1] - len * len).abs() < 1e-4 * len * len);
    }

    #[test]
    fn resistance_examples() {
        let edge = WeightedGraph::uniform(generators::path(2).unwrap());
        assert!((effective_resistance(&edge, 0, 1).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(effective_resistance(&edge, 0, 0).unwrap(), 0.0);

        let tri = WeightedGraph::uniform(generators::complete(3).unwrap());
        assert!((effective_resistance(&tri, 0, 1).unwrap() - 2.0 / 3.0).abs() < 1e-10);

        let path = WeightedGraph::uniform(generators::path(9).unwrap());
        assert!((effective_resistance(&path, 0, 8).unwrap() - 8.0).abs() < 1e-9);
    }

    #[test]
    fn rayleigh_monotonicity_spot_check() {
        let g = generators::grid(3, 3).unwrap();
        let full = WeightedGraph::uniform(g.clone());
        let base = effective_resistance(&full, 0, 8).unwrap();
        // delete one non-bridge edge at a time
        for skip in g.edges().collect::<Vec<_>>() {
            let edges: Vec<_> = g.edges().filter(|&e| e != skip).collect();
            let pruned = Graph::from_edges(9, &edges).unwrap();
            if !pruned.is_connected() {
                continue;
            }
            let wg = WeightedGraph::uniform(pruned);
            let r = effective_resistance(&wg, 0, 8).unwrap();
            assert!(r >= base - 1e-10);
        }
    }

    #[test]
    fn commute_identity_examples() {
        let tri = WeightedGraph::uniform(generators::complete(3).unwrap());
        // 2 + 2 = (2/3) * 6
        assert!(commute_identity_residual(&tri, 0, 1).unwrap() < 1e-9);

        let edge = WeightedGraph::uniform(generators::path(2).unwrap());
        assert!(commute_identity_residual(&edge, 0, 1).unwrap() < 1e-12);

        let mut rng = crate::rng::stream(0x5EED, 2);
        let g = crate::corpus::random_connected(20, 25, &mut rng);
        let wg = crate::corpus::random_weights(g, &mut rng);
        assert!(commute_identity_residual(&wg, 3, 17).unwrap() < 1e-8);
    }

    #[test]
    fn return_time_is_inverse_stationary() {
        let mut rng = crate::rng::stream(0x5EED, 3);
        let g = crate::corpus::random_connected(12, 14, &mut rng);
        let wg = crate::corpus::random_weights(g, &mut rng);
        let pi = stationary(&wg).unwrap();
        let n = wg.graph().vertex_count();
        for u in [0u32, 5, 11] {
            // one-step expansion of the first return time
            let sol = hitting_times(&wg, &VertexSet::from_iter(n, [u])).unwrap();
            let ret: f64 = 1.0
                + wg.graph()
                    .neighbors(u)
                    .iter()
                    .zip(wg.incident_weights(u))
                    .map(|(&w, &wt)| wt / wg.strength(u) * sol.values[w as usize])
                    .sum::<f64>();
            assert!((ret - 1.0 / pi[u as usize]).abs() < 1e-8 * ret);
        }
    }

    #[test]
    fn matthews_examples() {
        let k5 = WeightedGraph::uniform(generators::complete(5).unwrap());
        let single = VertexSet::from_iter(5, [2]);
        assert_eq!(matthews_bound(&k5, &single).unwrap(), 0.0);
        // pairwise hitting on K_n is n-1
        let all = VertexSet::full(5);
        let want = 4.0 * harmonic(5);
        assert!((matthews_bound(&k5, &all).unwrap() - want).abs() < 1e-9);

        let path3 = WeightedGraph::uniform(generators::path(3).unwrap());
        let want = 4.0 * (1.0 + 0.5 + 1.0 / 3.0);
        assert!((matthews_bound(&path3, &VertexSet::full(3)).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn layer_ratio_examples() {
        assert_eq!(layered_weight_ratio(0.0), 4.0);
        let want = 4.0 - (20.0 / 50.0) / (4.0 / 50.0 + 1.0);
        assert!((layered_weight_ratio(1.0 / 50.0) - want).abs() < 1e-15);
        for i in 0..=20 {
            let eps = i as f64 / 20.0 * 0.19;
            assert!(layered_weight_ratio(eps) >= 4.0 * (1.0 - 5.0 * eps) - 1e-12);
        }
    }

    #[test]
    fn layered_visit_ratio_matches_closed_form() {
        assert!((layered_visit_ratio(0.0, 4).unwrap() - 4.0).abs() < 1e-12);
        assert!((layered_visit_ratio(0.0, 5).unwrap() - 16.0).abs() < 1e-12);
        for &eps in &[0.0, 0.01, 0.05, 0.3] {
            for k in 4..=8 {
                let got = layered_visit_ratio(eps, k).unwrap();
                let want = layered_weight_ratio(eps).powi(k as i32 - 3);
                assert!((got - want).abs() <= 1e-9 * want);
            }
        }
    }

    #[test]
    fn expected_visits_geometric_case() {
        // weighted path 1 -- 4: from the middle of a 3-vertex path, visits to
        // the far end before the near end form a geometric count with mean 4
        let g = generators::path(3).unwrap();
        let wg = WeightedGraph::from_fn(g, |u, _| if u == 0 { 1.0 } else { 4.0 }).unwrap();
        let visits = expected_visits(
            &wg,
            &VertexSet::from_iter(3, [2]),
            &VertexSet::from_iter(3, [0]),
        )
        .unwrap();
        assert!((visits[1] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn cache_returns_shared_solutions() {
        let cache = ChainCache::new();
        let g = generators::grid(3, 3).unwrap();
        let anchor = VertexSet::from_iter(9, [0]);
        let wg = weight_field(&g, &anchor, 0.3).unwrap();
        let a = cache.hitting_times(&wg, &anchor).unwrap();
        let b = cache.hitting_times(&wg, &anchor).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
