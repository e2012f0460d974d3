//! Bounded-radius covers: validation, the randomized multi-scale ball
//! construction with its acceptance thresholds, and the per-set expansion
//! inequalities on the bipartite Cayley graphs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{AffineCayleyGraph, CayleyVariant, Part};
use crate::graph::{Graph, GraphError, InducedRadius, VertexSet};
use crate::rng;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("level count must be at least 1")]
    BadLevelCount,
    #[error("graph must have at least 2 vertices for the schedule")]
    TooSmall,
    #[error("no accepted cover within {retries} retries (best attempt attached)")]
    RetriesExhausted { retries: u32, best: Box<Cover> },
    #[error("cover set {0} has induced radius above the certificate")]
    RadiusViolation(usize),
    #[error("set has induced radius above {0}")]
    SampleRadius(u32),
}

/// One set of a cover, with its designated center and the construction level
/// it came from (when built by the randomized builder).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverSet {
    pub center: u32,
    pub level: Option<u32>,
    pub vertices: Vec<u32>,
}

/// A family of vertex sets claimed to cover the graph with bounded induced
/// radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cover {
    /// claimed radius bound for every induced subgraph
    pub radius: u32,
    /// construction level count (0 for hand-built covers)
    pub levels: u32,
    pub sets: Vec<CoverSet>,
}

impl Cover {
    pub fn set_vertex_sets(&self, n: usize) -> Vec<VertexSet> {
        self.sets
            .iter()
            .map(|s| VertexSet::from_iter(n, s.vertices.iter().copied()))
            .collect()
    }
}

/// Result of validating a cover against its host graph.
#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub covers_all: bool,
    pub uncovered_witness: Option<u32>,
    pub radius_ok: bool,
    pub radius_violation: Option<usize>,
    /// sum over sets of |closed neighborhood| divided by n
    pub overlap: f64,
    pub set_count: usize,
}

impl CoverReport {
    pub fn is_valid(&self) -> bool {
        self.covers_all && self.radius_ok
    }
}

/// Checks coverage, the radius certificate of every set, and computes the
/// exact overlap statistic. Certificates are checked from the designated
/// centers; on small graphs the full induced radius is computed as well.
pub fn validate_cover(graph: &Graph, cover: &Cover) -> CoverReport {
    let n = graph.vertex_count();
    let full_radius_check = n <= 200;
    let mut union = VertexSet::new(n);
    let mut overlap_total = 0usize;
    let mut radius_ok = true;
    let mut radius_violation = None;
    for (idx, set) in cover.sets.iter().enumerate() {
        let vs = VertexSet::from_iter(n, set.vertices.iter().copied());
        union.union_with(&vs);
        overlap_total += graph.closed_neighborhood(&vs).len();
        let center_ok = vs.contains(set.center)
            && graph
                .induced_eccentricity(&vs, set.center)
                .is_some_and(|ecc| ecc <= cover.radius);
        let ok = if center_ok {
            true
        } else if full_radius_check {
            // the designated center may be bad while the set is still fine
            graph
                .induced_radius(&vs)
                .map(|r| r.is_at_most(cover.radius))
                .unwrap_or(false)
        } else {
            false
        };
        if !ok && radius_ok {
            radius_ok = false;
            radius_violation = Some(idx);
        }
    }
    let covers_all = union.len() == n;
    let uncovered_witness = if covers_all {
        None
    } else {
        (0..n as u32).find(|&v| !union.contains(v))
    };
    CoverReport {
        covers_all,
        uncovered_witness,
        radius_ok,
        radius_violation,
        overlap: overlap_total as f64 / n as f64,
        set_count: cover.sets.len(),
    }
}

/// The sampling schedule of the randomized builder: thresholds
/// `t_i = (n log n)^(i/k)` and inclusion probabilities
/// `p_i = min(1, 2 log n / t_i)`, logs base 2.
#[derive(Debug, Clone)]
pub struct CoverSchedule {
    pub levels: usize,
    pub thresholds: Vec<f64>,
    pub inclusion: Vec<f64>,
}

impl CoverSchedule {
    pub fn new(n: usize, levels: usize) -> Result<Self, CoverError> {
        if levels == 0 {
            return Err(CoverError::BadLevelCount);
        }
        if n < 2 {
            return Err(CoverError::TooSmall);
        }
        let logn = (n as f64).log2();
        let base = n as f64 * logn;
        let thresholds: Vec<f64> = (0..=levels)
            .map(|i| base.powf(i as f64 / levels as f64))
            .collect();
        let inclusion: Vec<f64> = thresholds
            .iter()
            .map(|t| (2.0 * logn / t).min(1.0))
            .collect();
        Ok(CoverSchedule {
            levels,
            thresholds,
            inclusion,
        })
    }

    /// Acceptance threshold for the overlap statistic:
    /// `4 k n^(1/k) log^(1+1/k) n`.
    pub fn overlap_threshold(&self, n: usize) -> f64 {
        let k = self.levels as f64;
        let logn = (n as f64).log2();
        4.0 * k * (n as f64).powf(1.0 / k) * logn.powf(1.0 + 1.0 / k)
    }

    /// The eligible-center sets per level: vertices whose ball of radius 2^i
    /// stays below the next threshold.
    pub fn eligible_levels(&self, graph: &Graph) -> Vec<VertexSet> {
        let n = graph.vertex_count();
        let max_radius = 1u32 << (self.levels - 1);
        let mut out = vec![VertexSet::new(n); self.levels];
        for v in graph.vertices() {
            let dist = graph.distances_from_vertex(v, Some(max_radius));
            // ball sizes at radii 2^0 .. 2^(levels-1) from one truncated BFS
            let mut counts = vec![0usize; self.levels];
            for &d in &dist {
                if d == crate::graph::UNREACHED {
                    continue;
                }
                for (i, c) in counts.iter_mut().enumerate() {
                    if d <= (1u32 << i) {
                        *c += 1;
                    }
                }
            }
            for (i, &count) in counts.iter().enumerate() {
                if count as f64 <= self.thresholds[i + 1] {
                    out[i].insert(v);
                }
            }
        }
        out
    }
}

/// Builds a cover by sampling ball centers at every scale, retrying with
/// fresh randomness until the result covers the graph and its overlap is
/// within the acceptance threshold. The returned cover certifies radius
/// `2^(levels-1) - 1`.
pub fn build_random_cover(
    graph: &Graph,
    levels: usize,
    seed: u64,
    max_retries: u32,
) -> Result<Cover, CoverError> {
    let n = graph.vertex_count();
    if n == 1 {
        return Ok(Cover {
            radius: 0,
            levels: 1,
            sets: vec![CoverSet {
                center: 0,
                level: Some(0),
                vertices: vec![0],
            }],
        });
    }
    let schedule = CoverSchedule::new(n, levels)?;
    let eligible = schedule.eligible_levels(graph);
    let radius = (1u32 << (levels - 1)) - 1;
    let threshold = schedule.overlap_threshold(n);

    let mut best: Option<(f64, Cover)> = None;
    for attempt in 0..max_retries {
        let mut rng = rng::stream(seed, attempt as u64);
        let mut sets = Vec::new();
        for (i, centers) in eligible.iter().enumerate() {
            let p = schedule.inclusion[i];
            for v in centers.iter() {
                if rng.gen::<f64>() < p {
                    let ball = graph.ball(v, (1u32 << i) - 1);
                    sets.push(CoverSet {
                        center: v,
                        level: Some(i as u32),
                        vertices: ball.iter().collect(),
                    });
                }
            }
        }
        let cover = Cover {
            radius,
            levels: levels as u32,
            sets,
        };
        let report = validate_cover(graph, &cover);
        debug_assert!(report.radius_ok, "balls certify their own radius");
        if report.covers_all && report.overlap <= threshold {
            return Ok(cover);
        }
        let score = if report.covers_all {
            report.overlap
        } else {
            f64::INFINITY
        };
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, cover));
        }
    }
    Err(CoverError::RetriesExhausted {
        retries: max_retries,
        best: Box::new(best.expect("at least one attempt ran").1),
    })
}

/// Level count used when only the vertex count is known:
/// `round(2 sqrt(log n))`, clamped to the meaningful range.
pub fn sqrtlog_levels(n: usize) -> usize {
    let logn = (n as f64).log2();
    let k = (2.0 * logn.sqrt()).round() as usize;
    k.clamp(1, logn.ceil().max(1.0) as usize)
}

/// Builds a cover with the level count tuned to certify radius and overlap
/// both around `4^sqrt(log n)`.
pub fn build_sqrtlog_cover(
    graph: &Graph,
    seed: u64,
    max_retries: u32,
) -> Result<Cover, CoverError> {
    build_random_cover(graph, sqrtlog_levels(graph.vertex_count()), seed, max_retries)
}

/// Smallest level whose shrunken ball already holds a threshold worth of
/// eligible centers. Existence is guaranteed for every vertex; `None` would
/// signal a violated invariant.
pub fn greedy_ball_claim_level(
    graph: &Graph,
    v: u32,
    schedule: &CoverSchedule,
    eligible: &[VertexSet],
) -> Option<usize> {
    let max_radius = 1u32 << (schedule.levels - 1);
    let dist = graph.distances_from_vertex(v, Some(max_radius));
    for (i, centers) in eligible.iter().enumerate() {
        let radius = (1u32 << i) - 1;
        let count = centers
            .iter()
            .filter(|&w| dist[w as usize] <= radius)
            .count();
        if count as f64 >= schedule.thresholds[i] {
            return Some(i);
        }
    }
    None
}

/// Samples a subset of the ball around `center` whose induced eccentricity
/// from the center is at most `radius`: vertices join with probability 1/2
/// and each stranded sphere is repaired by adding an inward neighbor.
pub fn sample_bounded_radius_set(
    graph: &Graph,
    center: u32,
    radius: u32,
    rng: &mut ChaCha8Rng,
) -> VertexSet {
    let n = graph.vertex_count();
    let dist = graph.distances_from_vertex(center, Some(radius));
    let mut set = VertexSet::new(n);
    set.insert(center);
    for v in graph.vertices() {
        if v != center && dist[v as usize] <= radius && rng.gen::<f64>() < 0.5 {
            set.insert(v);
        }
    }
    // repair outside-in: every member at distance d needs a member neighbor
    // at distance d-1 so shortest paths to the center stay inside
    for d in (2..=radius).rev() {
        let members: Vec<u32> = set.iter().filter(|&v| dist[v as usize] == d).collect();
        for v in members {
            let is_inward = |w: u32| dist[w as usize].checked_add(1) == Some(d);
            let has_inward = graph
                .neighbors(v)
                .iter()
                .any(|&w| is_inward(w) && set.contains(w));
            if !has_inward {
                let inward: Vec<u32> = graph
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| is_inward(w))
                    .collect();
                set.insert(inward[rng.gen_range(0..inward.len())]);
            }
        }
    }
    debug_assert!(graph
        .induced_eccentricity(&set, center)
        .is_some_and(|e| e <= radius));
    set
}

/// Per-set expansion check on the two-generator bipartite Cayley graph: the
/// closed neighborhood of a radius-2 set must exceed `(p-1)/4` times its
/// second-part size.
pub fn radius2_expansion_holds(
    cayley: &AffineCayleyGraph,
    set: &VertexSet,
    center: u32,
) -> Result<(f64, f64), CoverError> {
    debug_assert_eq!(cayley.variant, CayleyVariant::Radius2);
    check_sample_radius(&cayley.graph, set, center, 2)?;
    let nplus = cayley.graph.closed_neighborhood(set).len() as f64;
    let in_y = set
        .iter()
        .filter(|&v| cayley.part_of[v as usize] == Part::Y)
        .count() as f64;
    Ok((nplus, (cayley.p as f64 - 1.0) / 4.0 * in_y))
}

/// Radius-3 analogue on the three-generator construction, with constant
/// `(p-1)/27`.
pub fn radius3_expansion_holds(
    cayley: &AffineCayleyGraph,
    set: &VertexSet,
    center: u32,
) -> Result<(f64, f64), CoverError> {
    debug_assert_eq!(cayley.variant, CayleyVariant::Radius3);
    check_sample_radius(&cayley.graph, set, center, 3)?;
    let nplus = cayley.graph.closed_neighborhood(set).len() as f64;
    let in_y = set
        .iter()
        .filter(|&v| cayley.part_of[v as usize] == Part::Y)
        .count() as f64;
    Ok((nplus, (cayley.p as f64 - 1.0) / 27.0 * in_y))
}

fn check_sample_radius(
    graph: &Graph,
    set: &VertexSet,
    center: u32,
    radius: u32,
) -> Result<(), CoverError> {
    let ok = set.contains(center)
        && graph
            .induced_eccentricity(set, center)
            .is_some_and(|e| e <= radius)
        || matches!(
            graph.induced_radius(set),
            Ok(InducedRadius::Finite { radius: r, .. }) if r <= radius
        );
    if ok {
        Ok(())
    } else {
        Err(CoverError::SampleRadius(radius))
    }
}

/// The one-set-per-vertex cover: radius 0, overlap `(2 e(G) + n) / n`.
pub fn singleton_cover(graph: &Graph) -> Cover {
    Cover {
        radius: 0,
        levels: 1,
        sets: graph
            .vertices()
            .map(|v| CoverSet {
                center: v,
                level: Some(0),
                vertices: vec![v],
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn singleton_cover_overlap() {
        let g = generators::grid(3, 3).unwrap();
        let cover = singleton_cover(&g);
        let report = validate_cover(&g, &cover);
        assert!(report.is_valid());
        let expected = (2.0 * g.edge_count() as f64 + 9.0) / 9.0;
        assert!((report.overlap - expected).abs() < 1e-12);
    }

    #[test]
    fn whole_graph_single_set_cover() {
        let g = generators::path(5).unwrap();
        let cover = Cover {
            radius: 2,
            levels: 0,
            sets: vec![CoverSet {
                center: 2,
                level: None,
                vertices: (0..5).collect(),
            }],
        };
        let report = validate_cover(&g, &cover);
        assert!(report.is_valid());
        assert!((report.overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_vertex_is_witnessed() {
        let g = generators::path(4).unwrap();
        let cover = Cover {
            radius: 1,
            levels: 0,
            sets: vec![CoverSet {
                center: 0,
                level: None,
                vertices: vec![0, 1],
            }],
        };
        let report = validate_cover(&g, &cover);
        assert!(!report.covers_all);
        assert_eq!(report.uncovered_witness, Some(2));
    }

    #[test]
    fn radius_violation_is_detected() {
        let g = generators::path(5).unwrap();
        let cover = Cover {
            radius: 1,
            levels: 0,
            sets: vec![CoverSet {
                center: 0,
                level: None,
                vertices: (0..5).collect(),
            }],
        };
        let report = validate_cover(&g, &cover);
        assert!(!report.radius_ok);
        assert_eq!(report.radius_violation, Some(0));
    }

    #[test]
    fn one_level_build_gives_singletons() {
        let g = generators::grid(4, 4).unwrap();
        let cover = build_random_cover(&g, 1, 7, 10).unwrap();
        assert_eq!(cover.radius, 0);
        assert_eq!(cover.sets.len(), 16);
        assert!(cover.sets.iter().all(|s| s.vertices.len() == 1));
        assert!(validate_cover(&g, &cover).is_valid());
    }

    #[test]
    fn schedule_boundary_values() {
        let s = CoverSchedule::new(64, 3).unwrap();
        assert_eq!(s.thresholds[0], 1.0);
        assert_eq!(s.inclusion[0], 1.0);
        assert!(s.thresholds[3] > 64.0);
        assert!(CoverSchedule::new(64, 0).is_err());
        assert!(CoverSchedule::new(1, 2).is_err());
    }

    #[test]
    fn two_level_cover_on_long_path() {
        let g = generators::path(64).unwrap();
        let cover = build_random_cover(&g, 2, 5, 100).unwrap();
        assert_eq!(cover.radius, 1);
        let report = validate_cover(&g, &cover);
        assert!(report.is_valid());
        let bound = CoverSchedule::new(64, 2).unwrap().overlap_threshold(64);
        assert!(report.overlap <= bound);
    }

    #[test]
    fn sqrtlog_level_choice() {
        assert_eq!(sqrtlog_levels(1024), 6);
        assert_eq!(sqrtlog_levels(4), 2);
        let g = generators::cycle(128).unwrap();
        let cover = build_sqrtlog_cover(&g, 3, 100).unwrap();
        assert!(validate_cover(&g, &cover).is_valid());
    }

    #[test]
    fn claim_level_exists_everywhere() {
        let g = generators::grid(8, 8).unwrap();
        for levels in 1..=4 {
            let schedule = CoverSchedule::new(64, levels).unwrap();
            let eligible = schedule.eligible_levels(&g);
            for v in g.vertices() {
                let got = greedy_ball_claim_level(&g, v, &schedule, &eligible);
                assert!(got.is_some(), "vertex {v} levels {levels}");
                if levels == 1 {
                    assert_eq!(got, Some(0));
                }
            }
        }
        // star: the hub has a huge ball yet some level still works
        let star: Vec<(u32, u32)> = (1..40).map(|v| (0, v)).collect();
        let star = crate::graph::Graph::from_edges(40, &star).unwrap();
        let schedule = CoverSchedule::new(40, 2).unwrap();
        let eligible = schedule.eligible_levels(&star);
        assert!(greedy_ball_claim_level(&star, 0, &schedule, &eligible).is_some());
    }

    #[test]
    fn sampled_sets_respect_radius() {
        let c = generators::affine_cayley_radius2(5).unwrap();
        let mut rng = rng::stream(8, 0);
        for trial in 0..50 {
            let center = trial % c.graph.vertex_count() as u32;
            let set = sample_bounded_radius_set(&c.graph, center, 2, &mut rng);
            assert!(c
                .graph
                .induced_eccentricity(&set, center)
                .is_some_and(|e| e <= 2));
        }
    }

    #[test]
    fn radius2_expansion_on_full_balls() {
        let c = generators::affine_cayley_radius2(5).unwrap();
        for center in [0u32, 25] {
            let ball = c.graph.ball(center, 2);
            let (lhs, rhs) = radius2_expansion_holds(&c, &ball, center).unwrap();
            assert!(lhs >= rhs, "center {center}: {lhs} < {rhs}");
        }
        // singleton in X has no second-part vertices at all
        let single = VertexSet::from_iter(c.graph.vertex_count(), [0]);
        let (_, rhs) = radius2_expansion_holds(&c, &single, 0).unwrap();
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn radius3_expansion_on_full_balls() {
        let c = generators::affine_cayley_radius3(3).unwrap();
        for center in [0u32, 20] {
            let ball = c.graph.ball(center, 3);
            let (lhs, rhs) = radius3_expansion_holds(&c, &ball, center).unwrap();
            assert!(lhs >= rhs);
        }
    }

    #[test]
    fn singleton_cover_is_sharp_on_complete_graphs() {
        for n in 2..=12 {
            let g = generators::complete(n).unwrap();
            let cover = singleton_cover(&g);
            let report = validate_cover(&g, &cover);
            assert!(report.is_valid());
            // every closed neighborhood is the whole graph
            assert!((report.overlap - n as f64).abs() < 1e-12);
        }
    }
}
