//! Controller strategies for the biased walk. A strategy sees the walk grow
//! one step at a time and, when the controller wins the coin flip, supplies a
//! distribution over the neighbors of the current vertex.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexSet, UNREACHED};

/// Who chose a step: the walk's own uniform randomness or the controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSource {
    Random,
    Controller,
}

/// A bias function. The walk calls `begin` once per trial, `distribution` or
/// `sample` when the controller gets to move, and `on_step` after every
/// executed step (controller-chosen or not), which lets stateful strategies
/// accumulate the full history.
pub trait BiasStrategy: Send + Sync {
    fn begin(&mut self, graph: &Graph, start: u32);

    /// Writes the controller's distribution over `graph.neighbors(current)`
    /// into `buf` (aligned with the neighbor list, summing to 1).
    fn distribution(&mut self, graph: &Graph, current: u32, buf: &mut Vec<f64>);

    /// Samples the controller's choice. The default materializes the
    /// distribution; hot strategies override it.
    fn sample(&mut self, graph: &Graph, current: u32, rng: &mut ChaCha8Rng) -> u32 {
        let mut buf = Vec::new();
        self.distribution(graph, current, &mut buf);
        let neighbors = graph.neighbors(current);
        let mut toss: f64 = rng.gen();
        for (i, &p) in buf.iter().enumerate() {
            if toss < p {
                return neighbors[i];
            }
            toss -= p;
        }
        *neighbors.last().expect("current vertex has a neighbor")
    }

    fn on_step(&mut self, _graph: &Graph, _next: u32, _source: StepSource) {}

    fn clone_strategy(&self) -> Box<dyn BiasStrategy>;
}

/// Baseline: the controller also moves uniformly, so the walk is simple.
#[derive(Debug, Clone, Default)]
pub struct UniformBias;

impl BiasStrategy for UniformBias {
    fn begin(&mut self, _: &Graph, _: u32) {}

    fn distribution(&mut self, graph: &Graph, current: u32, buf: &mut Vec<f64>) {
        let deg = graph.degree(current);
        buf.clear();
        buf.resize(deg, 1.0 / deg as f64);
    }

    fn sample(&mut self, graph: &Graph, current: u32, rng: &mut ChaCha8Rng) -> u32 {
        let nbrs = graph.neighbors(current);
        nbrs[rng.gen_range(0..nbrs.len())]
    }

    fn clone_strategy(&self) -> Box<dyn BiasStrategy> {
        Box::new(self.clone())
    }
}

/// Mixing weight for the two-group controller rule: probability of aiming at
/// the non-decreasing neighbors, chosen so the biased walk's one-step law
/// equals the distance-decay weighted walk.
pub fn outward_mix(eps: f64, closer: usize, other: usize) -> f64 {
    let n1 = closer as f64;
    let n2 = other as f64;
    (1.0 - eps) * n2 * n2 / ((n1 + n2) * (n1 + (1.0 - eps) * n2))
}

/// The weighted-walk emulator: steers toward an anchor set so that the
/// biased walk has exactly the law of the reversible walk under the
/// distance-decay weight field of the anchor.
#[derive(Debug, Clone)]
pub struct TowardSetBias {
    dist: Arc<Vec<u32>>,
    eps: f64,
}

impl TowardSetBias {
    pub fn new(graph: &Graph, anchor: &VertexSet, eps: f64) -> Self {
        let dist = graph.distances_from(anchor).expect("anchor must be nonempty");
        assert!(
            dist.iter().all(|&d| d != UNREACHED),
            "anchor must be reachable from every vertex"
        );
        TowardSetBias {
            dist: Arc::new(dist),
            eps,
        }
    }

    pub fn from_distances(dist: Arc<Vec<u32>>, eps: f64) -> Self {
        TowardSetBias { dist, eps }
    }

    fn closer_count(&self, graph: &Graph, current: u32) -> usize {
        let level = self.dist[current as usize];
        graph
            .neighbors(current)
            .iter()
            .filter(|&&w| self.dist[w as usize] + 1 == level)
            .count()
    }
}

impl BiasStrategy for TowardSetBias {
    fn begin(&mut self, _: &Graph, _: u32) {}

    fn distribution(&mut self, graph: &Graph, current: u32, buf: &mut Vec<f64>) {
        let nbrs = graph.neighbors(current);
        buf.clear();
        let level = self.dist[current as usize];
        if level == 0 {
            // inside the anchor every incident edge has unit weight, so the
            // weighted walk (and hence the controller) moves uniformly
            buf.resize(nbrs.len(), 1.0 / nbrs.len() as f64);
            return;
        }
        let closer = self.closer_count(graph, current);
        let other = nbrs.len() - closer;
        let p = outward_mix(self.eps, closer, other);
        let p_closer = (1.0 - p) / closer as f64;
        let p_other = if other == 0 { 0.0 } else { p / other as f64 };
        buf.extend(nbrs.iter().map(|&w| {
            if self.dist[w as usize] + 1 == level {
                p_closer
            } else {
                p_other
            }
        }));
    }

    fn sample(&mut self, graph: &Graph, current: u32, rng: &mut ChaCha8Rng) -> u32 {
        let nbrs = graph.neighbors(current);
        let level = self.dist[current as usize];
        if level == 0 {
            return nbrs[rng.gen_range(0..nbrs.len())];
        }
        let closer = self.closer_count(graph, current);
        let other = nbrs.len() - closer;
        let p = outward_mix(self.eps, closer, other);
        let aim_closer = other == 0 || rng.gen::<f64>() >= p;
        let (want, count) = if aim_closer { (true, closer) } else { (false, other) };
        let mut pick = rng.gen_range(0..count);
        for &w in nbrs {
            if (self.dist[w as usize] + 1 == level) == want {
                if pick == 0 {
                    return w;
                }
                pick -= 1;
            }
        }
        unreachable!("group index within bounds")
    }

    fn clone_strategy(&self) -> Box<dyn BiasStrategy> {
        Box::new(self.clone())
    }
}

/// Naive steering: the controller aims uniformly at the neighbors strictly
/// closer to the target, and moves uniformly once inside it.
#[derive(Debug, Clone)]
pub struct NaiveTowardBias {
    dist: Arc<Vec<u32>>,
}

impl NaiveTowardBias {
    pub fn new(graph: &Graph, target: &VertexSet) -> Self {
        let dist = graph.distances_from(target).expect("target must be nonempty");
        NaiveTowardBias { dist: Arc::new(dist) }
    }
}

impl BiasStrategy for NaiveTowardBias {
    fn begin(&mut self, _: &Graph, _: u32) {}

    fn distribution(&mut self, graph: &Graph, current: u32, buf: &mut Vec<f64>) {
        let nbrs = graph.neighbors(current);
        buf.clear();
        let level = self.dist[current as usize];
        let closer = nbrs
            .iter()
            .filter(|&&w| self.dist[w as usize] + 1 == level)
            .count();
        if level == 0 || closer == 0 {
            buf.resize(nbrs.len(), 1.0 / nbrs.len() as f64);
            return;
        }
        buf.extend(nbrs.iter().map(|&w| {
            if self.dist[w as usize] + 1 == level {
                1.0 / closer as f64
            } else {
                0.0
            }
        }));
    }

    fn clone_strategy(&self) -> Box<dyn BiasStrategy> {
        Box::new(self.clone())
    }
}

/// Shared plan for the spanning-walk strategy: a depth-first double
/// traversal of a BFS spanning tree, and a distance field per tour vertex.
#[derive(Debug)]
struct SpanningPlan {
    start: u32,
    tour: Vec<u32>,
    dist_to: Vec<Option<Arc<Vec<u32>>>>,
}

fn build_spanning_plan(graph: &Graph, start: u32) -> SpanningPlan {
    let n = graph.vertex_count();
    // BFS spanning tree rooted at the start
    let dist = graph.distances_from_vertex(start, None);
    assert!(
        dist.iter().all(|&d| d != UNREACHED),
        "graph must be connected"
    );
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in graph.vertices() {
        if v == start {
            continue;
        }
        let parent = *graph
            .neighbors(v)
            .iter()
            .find(|&&w| dist[w as usize] + 1 == dist[v as usize])
            .expect("BFS parent exists");
        children[parent as usize].push(v);
    }
    // iterative depth-first double traversal (Euler tour)
    let mut tour = Vec::with_capacity(2 * n);
    let mut stack = vec![(start, 0usize)];
    tour.push(start);
    while let Some((v, child_idx)) = stack.pop() {
        if child_idx < children[v as usize].len() {
            let c = children[v as usize][child_idx];
            stack.push((v, child_idx + 1));
            stack.push((c, 0));
            tour.push(c);
        } else if let Some(&(parent, _)) = stack.last() {
            tour.push(parent);
        }
    }
    debug_assert!(tour.len() <= 2 * n);
    let mut dist_to: Vec<Option<Arc<Vec<u32>>>> = vec![None; n];
    for &v in &tour {
        if dist_to[v as usize].is_none() {
            dist_to[v as usize] = Some(Arc::new(graph.distances_from_vertex(v, None)));
        }
    }
    SpanningPlan {
        start,
        tour,
        dist_to,
    }
}

/// Covers the graph by walking a spanning-tree tour, delegating each leg to
/// the weighted-walk emulator aimed at the next unreached tour vertex.
#[derive(Clone)]
pub struct SpanningWalkBias {
    plan: Arc<SpanningPlan>,
    eps: f64,
    next_waypoint: usize,
    leg: TowardSetBias,
}

impl SpanningWalkBias {
    pub fn new(graph: &Graph, eps: f64, start: u32) -> Self {
        let plan = Arc::new(build_spanning_plan(graph, start));
        let leg = if plan.tour.len() > 1 {
            Self::leg_for(&plan, eps, 1)
        } else {
            // single-vertex tour; the leg is never consulted
            TowardSetBias::from_distances(Arc::new(vec![0]), eps)
        };
        SpanningWalkBias {
            plan,
            eps,
            next_waypoint: 1,
            leg,
        }
    }

    /// Index of the tour waypoint the walk currently aims for.
    pub fn waypoint_index(&self) -> usize {
        self.next_waypoint
    }

    pub fn tour(&self) -> &[u32] {
        &self.plan.tour
    }

    fn leg_for(plan: &SpanningPlan, eps: f64, waypoint: usize) -> TowardSetBias {
        let target = plan.tour[waypoint];
        let dist = plan.dist_to[target as usize]
            .as_ref()
            .expect("tour vertex has a distance field")
            .clone();
        TowardSetBias::from_distances(dist, eps)
    }

    fn advance_past(&mut self, vertex: u32) {
        let tour = &self.plan.tour;
        let mut moved = false;
        while self.next_waypoint < tour.len() && tour[self.next_waypoint] == vertex {
            self.next_waypoint += 1;
            moved = true;
        }
        if moved && self.next_waypoint < tour.len() {
            self.leg = Self::leg_for(&self.plan, self.eps, self.next_waypoint);
        }
    }
}

impl BiasStrategy for SpanningWalkBias {
    fn begin(&mut self, _: &Graph, start: u32) {
        assert_eq!(
            start, self.plan.start,
            "spanning-walk strategy is planned for a fixed start vertex"
        );
        self.next_waypoint = 1.min(self.plan.tour.len());
        if self.next_waypoint < self.plan.tour.len() {
            self.leg = Self::leg_for(&self.plan, self.eps, self.next_waypoint);
        }
    }

    fn distribution(&mut self, graph: &Graph, current: u32, buf: &mut Vec<f64>) {
        if self.next_waypoint >= self.plan.tour.len() {
            UniformBias.distribution(graph, current, buf);
            return;
        }
        self.leg.distribution(graph, current, buf);
    }

    fn sample(&mut self, graph: &Graph, current: u32, rng: &mut ChaCha8Rng) -> u32 {
        if self.next_waypoint >= self.plan.tour.len() {
            return UniformBias.sample(graph, current, rng);
        }
        self.leg.sample(graph, current, rng)
    }

    fn on_step(&mut self, _graph: &Graph, next: u32, _source: StepSource) {
        self.advance_past(next);
    }

    fn clone_strategy(&self) -> Box<dyn BiasStrategy> {
        Box::new(self.clone())
    }
}

/// Steers toward the nearest vertex the walk has not visited yet. Strongly
/// history-dependent; provided for empirical comparison only.
#[derive(Debug, Clone)]
pub struct ClosestUncoveredBias {
    visited: VertexSet,
}

impl ClosestUncoveredBias {
    pub fn new(graph: &Graph) -> Self {
        ClosestUncoveredBias {
            visited: VertexSet::new(graph.vertex_count()),
        }
    }

    fn uncovered(&self, graph: &Graph) -> Option<VertexSet> {
        if self.visited.len() == graph.vertex_count() {
            return None;
        }
        let mut un = VertexSet::new(graph.vertex_count());
        for v in graph.vertices() {
            if !self.visited.contains(v) {
                un.insert(v);
            }
        }
        Some(un)
    }
}

impl BiasStrategy for ClosestUncoveredBias {
    fn begin(&mut self, graph: &Graph, start: u32) {
        self.visited = VertexSet::new(graph.vertex_count());
        self.visited.insert(start);
    }

    fn distribution(&mut self, graph: &Graph, current: u32, buf: &mut Vec<f64>) {
        match self.uncovered(graph) {
            None => UniformBias.distribution(graph, current, buf),
            Some(un) => {
                let dist = graph.distances_from(&un).expect("uncovered nonempty");
                let nbrs = graph.neighbors(current);
                let level = dist[current as usize];
                let closer = nbrs
                    .iter()
                    .filter(|&&w| dist[w as usize] + 1 == level)
                    .count();
                buf.clear();
                if level == 0 || closer == 0 {
                    buf.resize(nbrs.len(), 1.0 / nbrs.len() as f64);
                } else {
                    buf.extend(nbrs.iter().map(|&w| {
                        if dist[w as usize] + 1 == level {
                            1.0 / closer as f64
                        } else {
                            0.0
                        }
                    }));
                }
            }
        }
    }

    fn on_step(&mut self, _graph: &Graph, next: u32, _source: StepSource) {
        self.visited.insert(next);
    }

    fn clone_strategy(&self) -> Box<dyn BiasStrategy> {
        Box::new(self.clone())
    }
}

/// One step of the biased walk: with probability 1 - eps a uniform neighbor,
/// otherwise the controller's choice.
pub fn tbrw_step(
    graph: &Graph,
    eps: f64,
    strategy: &mut dyn BiasStrategy,
    current: u32,
    rng: &mut ChaCha8Rng,
) -> (u32, StepSource) {
    let nbrs = graph.neighbors(current);
    assert!(!nbrs.is_empty(), "vertex {current} is isolated");
    if rng.gen::<f64>() < eps {
        (strategy.sample(graph, current, rng), StepSource::Controller)
    } else {
        (nbrs[rng.gen_range(0..nbrs.len())], StepSource::Random)
    }
}

/// Exact one-step law of the biased walk at `current`, aligned with the
/// neighbor list: the (1 - eps) uniform part plus eps times the controller.
pub fn one_step_law(
    graph: &Graph,
    eps: f64,
    strategy: &mut dyn BiasStrategy,
    current: u32,
) -> Vec<f64> {
    let deg = graph.degree(current);
    let mut ctrl = Vec::new();
    strategy.distribution(graph, current, &mut ctrl);
    ctrl.iter()
        .map(|c| (1.0 - eps) / deg as f64 + eps * c)
        .collect()
}

/// Total variation distance between two distributions over the same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::weights::weight_field;

    #[test]
    fn step_law_matches_mixture() {
        // degree-2 vertex, point mass on one neighbor, eps = 1/2:
        // law is 3/4 on it and 1/4 on the other
        let g = generators::path(3).unwrap();
        let mut phi = NaiveTowardBias::new(&g, &VertexSet::from_iter(3, [0]));
        let law = one_step_law(&g, 0.5, &mut phi, 1);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!((law[0] - 0.75).abs() < 1e-15);
        assert!((law[1] - 0.25).abs() < 1e-15);

        // eps = 0: uniform regardless of the controller
        let law = one_step_law(&g, 0.0, &mut phi, 1);
        assert_eq!(law, vec![0.5, 0.5]);

        // eps = 1: exactly the controller's distribution
        let law = one_step_law(&g, 1.0, &mut phi, 1);
        assert_eq!(law, vec![1.0, 0.0]);
    }

    #[test]
    fn toward_set_mix_weight_on_path() {
        let g = generators::path(3).unwrap();
        let anchor = VertexSet::from_iter(3, [0]);
        assert!((outward_mix(0.5, 1, 1) - 1.0 / 6.0).abs() < 1e-15);
        let mut phi = TowardSetBias::new(&g, &anchor, 0.5);
        let law = one_step_law(&g, 0.5, &mut phi, 1);
        assert!((law[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((law[1] - 1.0 / 3.0).abs() < 1e-12);
        // matches the weighted walk with weights (1, 1/2)
        let wg = weight_field(&g, &anchor, 0.5).unwrap();
        assert!((wg.transition(1, 0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn toward_set_matches_weighted_walk_everywhere() {
        let mut rng = crate::rng::stream(11, 0);
        for trial in 0..40 {
            let g = crate::corpus::random_connected(4 + trial % 20, trial % 9, &mut rng);
            let n = g.vertex_count();
            let eps = [0.1, 0.3, 0.5, 0.9][trial % 4];
            let anchor = VertexSet::from_iter(
                n,
                (0..=trial as u32 % 3).map(|i| (i * 7) % n as u32),
            );
            let wg = weight_field(&g, &anchor, eps).unwrap();
            let mut phi = TowardSetBias::new(&g, &anchor, eps);
            for v in g.vertices() {
                let law = one_step_law(&g, eps, &mut phi, v);
                let weighted = wg.transition_row(v);
                assert!(total_variation(&law, &weighted) <= 1e-12);
            }
        }
    }

    #[test]
    fn outward_mix_stays_in_unit_interval() {
        for n1 in 1..30usize {
            for n2 in 0..30usize {
                for e in 0..=10 {
                    let p = outward_mix(e as f64 / 10.0, n1, n2);
                    assert!((0.0..=1.0).contains(&p), "p={p} n1={n1} n2={n2} e={e}");
                }
            }
        }
    }

    #[test]
    fn naive_toward_splits_ties() {
        let g = generators::grid(3, 3).unwrap();
        let target = VertexSet::from_iter(9, [0]);
        let mut phi = NaiveTowardBias::new(&g, &target);
        // center vertex 4 has two distance-decreasing neighbors: 1 and 3
        let mut buf = Vec::new();
        phi.distribution(&g, 4, &mut buf);
        let nbrs = g.neighbors(4);
        for (i, &w) in nbrs.iter().enumerate() {
            let want = if w == 1 || w == 3 { 0.5 } else { 0.0 };
            assert!((buf[i] - want).abs() < 1e-15);
        }
        // inside the target: uniform
        phi.distribution(&g, 0, &mut buf);
        assert!(buf.iter().all(|&p| (p - 0.5).abs() < 1e-15));
    }

    #[test]
    fn spanning_tour_covers_and_is_short() {
        let g = generators::grid(4, 4).unwrap();
        let strat = SpanningWalkBias::new(&g, 0.5, 5);
        let tour = strat.tour();
        assert!(tour.len() <= 2 * 16);
        assert_eq!(tour[0], 5);
        let mut seen = VertexSet::new(16);
        for &v in tour {
            seen.insert(v);
        }
        assert_eq!(seen.len(), 16);
        for pair in tour.windows(2) {
            assert!(g.has_edge(pair[0], pair[1]));
        }
    }

    #[test]
    fn spanning_waypoints_advance_monotonically() {
        let g = generators::path(6).unwrap();
        let mut strat = SpanningWalkBias::new(&g, 0.5, 0);
        strat.begin(&g, 0);
        let mut idx = strat.waypoint_index();
        let mut rng = crate::rng::stream(5, 0);
        let mut v = 0u32;
        for _ in 0..200 {
            let (next, src) = tbrw_step(&g, 0.5, &mut strat, v, &mut rng);
            strat.on_step(&g, next, src);
            v = next;
            assert!(strat.waypoint_index() >= idx);
            idx = strat.waypoint_index();
        }
        assert!(idx >= strat.tour().len() - 1, "walk should consume the tour");
    }

    #[test]
    fn single_vertex_graph_is_trivially_covered() {
        let g = generators::path(1).unwrap();
        let strat = SpanningWalkBias::new(&g, 0.5, 0);
        assert_eq!(strat.tour(), &[0]);
    }

    #[test]
    fn closest_uncovered_tracks_visits() {
        let g = generators::path(4).unwrap();
        let mut strat = ClosestUncoveredBias::new(&g);
        strat.begin(&g, 1);
        let mut buf = Vec::new();
        // from 1 the nearest uncovered vertex is either side; both neighbors tie
        strat.distribution(&g, 1, &mut buf);
        assert_eq!(buf, vec![0.5, 0.5]);
        strat.on_step(&g, 0, StepSource::Controller);
        // now everything uncovered lies to the right
        strat.distribution(&g, 0, &mut buf);
        assert_eq!(buf, vec![1.0]);
    }
}
