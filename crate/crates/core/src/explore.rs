//! The global cover-exploration strategy: fatten each cover set of the graph
//! power, link overlapping regions into a tree, and walk a recursive
//! depth-first exploration where each region is covered by a local
//! weighted-walk emulator before control returns through its portal.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::chain;
use crate::cover::{validate_cover, Cover};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::rng;
use crate::strategies::{outward_mix, StepSource};
use crate::walk::EstimatorReport;
use crate::weights::WeightedGraph;

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chain(#[from] chain::ChainError),
    #[error("bias strength must lie strictly between 0 and 1, got {0}")]
    BadEps(f64),
    #[error("cover is not valid for the power graph: {0}")]
    InvalidCover(String),
    #[error("start vertex {0} lies in no cover set")]
    StartNotCovered(u32),
    #[error("region overlap graph is disconnected")]
    RegionGraphDisconnected,
    #[error("walk exceeded the step cap of {0}")]
    StepCapExceeded(u64),
    #[error("every trial exceeded the step cap of {0}")]
    AllTrialsCapped(u64),
}

/// Graph-power exponent for a given bias strength: the smallest even integer
/// at least `-4 log_(1-eps) n`, so `(1-eps)^(k/2) <= n^-2`.
pub fn choose_power_exponent(eps: f64, n: usize) -> Result<usize, ExploreError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ExploreError::BadEps(eps));
    }
    let raw = -4.0 * (n as f64).ln() / (1.0 - eps).ln();
    let mut k = (raw - 1e-9).ceil().max(2.0) as usize;
    if k % 2 == 1 {
        k += 1;
    }
    Ok(k)
}

struct PlanSet {
    core: VertexSet,
    fattened: VertexSet,
    /// distance from each vertex to the fattened set
    dist: Vec<u32>,
    /// |closed neighborhood of the core in the power graph|
    nplus_power: usize,
}

/// Immutable plan for the global strategy: regions, their tree, portals and
/// entry points. Shared read-only by all trials.
pub struct ExplorationPlan {
    pub eps: f64,
    pub power_exponent: usize,
    pub start: u32,
    /// radius certificate of the cover on the power graph
    pub cover_radius: u32,
    /// exact overlap statistic of the cover on the power graph
    pub overlap: f64,
    /// maximum degree of the base graph
    pub max_degree: usize,
    pub root: usize,
    sets: Vec<PlanSet>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// entry vertex per region: the start for the root, the parent portal
    /// otherwise
    entry: Vec<u32>,
}

impl ExplorationPlan {
    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn core(&self, i: usize) -> &VertexSet {
        &self.sets[i].core
    }

    pub fn fattened(&self, i: usize) -> &VertexSet {
        &self.sets[i].fattened
    }

    pub fn entry(&self, i: usize) -> u32 {
        self.entry[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn nplus_power(&self, i: usize) -> usize {
        self.sets[i].nplus_power
    }

    pub fn dist_to_fattened(&self, i: usize) -> &[u32] {
        &self.sets[i].dist
    }

    /// Weight of an edge under region i's weight field.
    pub fn edge_weight(&self, i: usize, u: u32, v: u32) -> f64 {
        let d = self.sets[i].dist[u as usize].min(self.sets[i].dist[v as usize]);
        (1.0 - self.eps).powi(d as i32)
    }

    /// The weighted graph a region's local strategy emulates.
    pub fn region_weights(&self, graph: &Graph, i: usize) -> WeightedGraph {
        WeightedGraph::from_fn(graph.clone(), |u, v| self.edge_weight(i, u, v))
            .expect("decay weights are positive")
    }

    /// Transition law of the region walk at `v`, aligned with the neighbors.
    pub fn transition_row(&self, graph: &Graph, i: usize, v: u32) -> Vec<f64> {
        let weights: Vec<f64> = graph
            .neighbors(v)
            .iter()
            .map(|&w| self.edge_weight(i, v, w))
            .collect();
        let total: f64 = weights.iter().sum();
        weights.into_iter().map(|w| w / total).collect()
    }

    /// Expected-cover-time bound for the whole strategy:
    /// `32 eps^-1 maxdeg (r+1) K n log^2 n`.
    pub fn global_bound(&self, n: usize) -> f64 {
        let logn = (n as f64).log2();
        32.0 / self.eps
            * self.max_degree as f64
            * (self.cover_radius as f64 + 1.0)
            * self.overlap
            * n as f64
            * logn
            * logn
    }
}

/// Builds the exploration plan from a cover of the graph power.
pub fn build_plan(
    graph: &Graph,
    eps: f64,
    start: u32,
    cover: &Cover,
) -> Result<ExplorationPlan, ExploreError> {
    let n = graph.vertex_count();
    let k = choose_power_exponent(eps, n)?;
    let power = graph.power(k as i64)?;
    let report = validate_cover(&power, cover);
    if !report.is_valid() {
        return Err(ExploreError::InvalidCover(format!(
            "covers_all={} radius_ok={} (witness {:?}, set {:?})",
            report.covers_all, report.radius_ok, report.uncovered_witness, report.radius_violation
        )));
    }

    let cores = cover.set_vertex_sets(n);
    let root = cores
        .iter()
        .position(|c| c.contains(start))
        .ok_or(ExploreError::StartNotCovered(start))?;

    let half = (k / 2) as u32;
    let mut sets = Vec::with_capacity(cores.len());
    for core in &cores {
        let core_dist = graph.distances_from(core)?;
        let mut fattened = VertexSet::new(n);
        let dist: Vec<u32> = core_dist.iter().map(|&d| d.saturating_sub(half)).collect();
        for (v, &d) in dist.iter().enumerate() {
            if d == 0 {
                fattened.insert(v as u32);
            }
        }
        sets.push(PlanSet {
            nplus_power: power.closed_neighborhood(core).len(),
            core: core.clone(),
            fattened,
            dist,
        });
    }

    // region overlap graph and its BFS tree from the root
    let m = sets.len();
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut order = vec![usize::MAX; m];
    let mut queue = std::collections::VecDeque::new();
    order[root] = 0;
    queue.push_back(root);
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        for j in 0..m {
            if order[j] == usize::MAX && sets[i].fattened.intersects(&sets[j].fattened) {
                order[j] = reached;
                parent[j] = Some(i);
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    if reached != m {
        return Err(ExploreError::RegionGraphDisconnected);
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut entry = vec![start; m];
    for j in 0..m {
        if let Some(p) = parent[j] {
            children[p].push(j);
            // lowest-id vertex of the overlap serves as the portal
            let portal = sets[p]
                .fattened
                .iter()
                .find(|&v| sets[j].fattened.contains(v))
                .expect("tree edge implies overlap");
            entry[j] = portal;
        }
    }

    Ok(ExplorationPlan {
        eps,
        power_exponent: k,
        start,
        cover_radius: cover.radius,
        overlap: report.overlap,
        max_degree: graph.max_degree(),
        root,
        sets,
        parent,
        children,
        entry,
    })
}

/// One recorded step of a traced exploration walk.
#[derive(Debug, Clone, Copy)]
pub struct TraceStep {
    pub next: u32,
    pub source: StepSource,
    pub active_region: u32,
}

#[derive(Debug, Clone)]
pub struct ExplorationTrace {
    pub start: u32,
    pub steps: Vec<TraceStep>,
}

impl ExplorationTrace {
    /// The glued subsequence of positions during which region `i` was
    /// active, starting at its entry vertex. Child excursions collapse
    /// because they start and end at the same portal.
    pub fn region_subsequence(&self, plan: &ExplorationPlan, i: usize) -> Vec<u32> {
        let mut seq = vec![plan.entry(i)];
        seq.extend(
            self.steps
                .iter()
                .filter(|s| s.active_region as usize == i)
                .map(|s| s.next),
        );
        seq
    }
}

/// Outcome of one exploration run.
#[derive(Debug, Clone, Serialize)]
pub struct ExplorationRun {
    /// first time every vertex of the graph had been visited
    pub cover_time: u64,
    /// steps until the root exploration terminated
    pub total_steps: u64,
    /// steps during which each region was active
    pub active_steps: Vec<u64>,
}

struct Runtime<'a> {
    plan: &'a ExplorationPlan,
    graph: &'a Graph,
    stack: Vec<usize>,
    visited: Vec<VertexSet>,
    remaining: Vec<usize>,
    unfinished_children: Vec<usize>,
    launched: Vec<bool>,
    /// per region: portal vertex -> unlaunched children (ascending index)
    pending: Vec<BTreeMap<u32, Vec<usize>>>,
    active_steps: Vec<u64>,
}

enum Settle {
    Continue,
    RootDone,
}

impl<'a> Runtime<'a> {
    fn new(plan: &'a ExplorationPlan, graph: &'a Graph) -> Self {
        let m = plan.set_count();
        let mut pending: Vec<BTreeMap<u32, Vec<usize>>> = vec![BTreeMap::new(); m];
        for (i, map) in pending.iter_mut().enumerate() {
            for &c in plan.children(i) {
                map.entry(plan.entry(c)).or_default().push(c);
            }
        }
        let mut rt = Runtime {
            plan,
            graph,
            stack: vec![plan.root],
            visited: (0..m)
                .map(|_| VertexSet::new(graph.vertex_count()))
                .collect(),
            remaining: (0..m).map(|i| plan.fattened(i).len()).collect(),
            unfinished_children: (0..m).map(|i| plan.children(i).len()).collect(),
            launched: vec![false; m],
            pending,
            active_steps: vec![0; m],
        };
        rt.launched[plan.root] = true;
        rt.mark(plan.root, plan.start);
        rt
    }

    fn mark(&mut self, region: usize, v: u32) {
        if self.plan.fattened(region).contains(v) && self.visited[region].insert(v) {
            self.remaining[region] -= 1;
        }
    }

    /// Launches pending children whose portal is the current vertex and
    /// finishes completed regions; loops until the active region can step.
    fn settle(&mut self, current: u32) -> Settle {
        loop {
            let Some(&i) = self.stack.last() else {
                return Settle::RootDone;
            };
            // launch the lowest-index unexplored child whose portal is here
            let launch = match self.pending[i].get_mut(&current) {
                Some(kids) => {
                    let child = kids.remove(0);
                    if kids.is_empty() {
                        self.pending[i].remove(&current);
                    }
                    Some(child)
                }
                None => None,
            };
            if let Some(child) = launch {
                self.launched[child] = true;
                self.stack.push(child);
                self.mark(child, current);
                continue;
            }
            if self.remaining[i] == 0
                && current == self.plan.entry(i)
                && self.unfinished_children[i] == 0
            {
                self.stack.pop();
                if let Some(&p) = self.stack.last() {
                    self.unfinished_children[p] -= 1;
                    self.mark(p, current);
                    continue;
                }
                return Settle::RootDone;
            }
            return Settle::Continue;
        }
    }

    /// Controller sample for the active region at a vertex outside its
    /// fattened set.
    fn controller_choice(&self, region: usize, current: u32, rng: &mut ChaCha8Rng) -> u32 {
        let dist = &self.plan.sets[region].dist;
        let nbrs = self.graph.neighbors(current);
        let level = dist[current as usize];
        debug_assert!(level > 0);
        let closer = nbrs
            .iter()
            .filter(|&&w| dist[w as usize] + 1 == level)
            .count();
        let other = nbrs.len() - closer;
        let p = outward_mix(self.plan.eps, closer, other);
        let aim_closer = other == 0 || rng.gen::<f64>() >= p;
        let (want, count) = if aim_closer { (true, closer) } else { (false, other) };
        let mut pick = rng.gen_range(0..count);
        for &w in nbrs {
            if (dist[w as usize] + 1 == level) == want {
                if pick == 0 {
                    return w;
                }
                pick -= 1;
            }
        }
        unreachable!("group member exists")
    }
}

fn run_inner(
    plan: &ExplorationPlan,
    graph: &Graph,
    seed: (u64, u64),
    cap: u64,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> Result<ExplorationRun, ExploreError> {
    let n = graph.vertex_count();
    let mut rng = rng::stream(seed.0, seed.1);
    let mut rt = Runtime::new(plan, graph);
    let mut first_visit_pending = n - 1;
    let mut seen = VertexSet::new(n);
    seen.insert(plan.start);
    let mut cover_time = if n == 1 { Some(0u64) } else { None };
    let mut current = plan.start;
    let mut t: u64 = 0;

    if matches!(rt.settle(current), Settle::RootDone) {
        return Ok(ExplorationRun {
            cover_time: cover_time.unwrap_or(0),
            total_steps: 0,
            active_steps: rt.active_steps,
        });
    }
    loop {
        if t >= cap {
            return Err(ExploreError::StepCapExceeded(cap));
        }
        let region = *rt.stack.last().expect("active region");
        let dist = &plan.sets[region].dist;
        let nbrs = graph.neighbors(current);
        let (next, source) = if trace.is_none() && dist[current as usize] == 0 {
            // inside the fattened set both the uniform part and the
            // controller move uniformly, so one draw suffices
            (nbrs[rng.gen_range(0..nbrs.len())], StepSource::Random)
        } else if rng.gen::<f64>() < plan.eps {
            let choice = if dist[current as usize] == 0 {
                nbrs[rng.gen_range(0..nbrs.len())]
            } else {
                rt.controller_choice(region, current, &mut rng)
            };
            (choice, StepSource::Controller)
        } else {
            (nbrs[rng.gen_range(0..nbrs.len())], StepSource::Random)
        };
        t += 1;
        rt.active_steps[region] += 1;
        if let Some(log) = trace.as_deref_mut() {
            log.push(TraceStep {
                next,
                source,
                active_region: region as u32,
            });
        }
        if cover_time.is_none() && seen.insert(next) {
            first_visit_pending -= 1;
            if first_visit_pending == 0 {
                cover_time = Some(t);
            }
        }
        rt.mark(region, next);
        current = next;
        if matches!(rt.settle(current), Settle::RootDone) {
            break;
        }
    }
    let cover_time = cover_time.expect("root termination covers the graph");
    debug_assert_eq!(t, rt.active_steps.iter().sum::<u64>());
    Ok(ExplorationRun {
        cover_time,
        total_steps: t,
        active_steps: rt.active_steps,
    })
}

/// One exploration walk, counters only.
pub fn run_exploration(
    plan: &ExplorationPlan,
    graph: &Graph,
    seed: (u64, u64),
    cap: u64,
) -> Result<ExplorationRun, ExploreError> {
    run_inner(plan, graph, seed, cap, None)
}

/// One exploration walk with a full step log.
pub fn run_exploration_traced(
    plan: &ExplorationPlan,
    graph: &Graph,
    seed: (u64, u64),
    cap: u64,
) -> Result<(ExplorationRun, ExplorationTrace), ExploreError> {
    let mut steps = Vec::new();
    let run = run_inner(plan, graph, seed, cap, Some(&mut steps))?;
    Ok((
        run,
        ExplorationTrace {
            start: plan.start,
            steps,
        },
    ))
}

/// Monte Carlo report for the global strategy.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalReport {
    pub cover_time: EstimatorReport,
    pub mean_total_steps: f64,
    pub mean_active_steps: Vec<f64>,
    /// the cover time never exceeded the active-step total in any run
    pub decomposition_ok: bool,
    pub capped: u32,
    /// per-run (cover time, total steps) in trial order; None marks a cap
    #[serde(skip)]
    pub per_run: Vec<Option<(u64, u64)>>,
}

/// Runs seeded parallel trials of the full exploration.
pub fn run_global(
    plan: &ExplorationPlan,
    graph: &Graph,
    trials: u32,
    seed: u64,
    cap: u64,
) -> Result<GlobalReport, ExploreError> {
    let runs: Vec<Option<ExplorationRun>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| run_exploration(plan, graph, (seed, trial), cap).ok())
        .collect();
    let done: Vec<&ExplorationRun> = runs.iter().flatten().collect();
    if done.is_empty() {
        return Err(ExploreError::AllTrialsCapped(cap));
    }
    let capped = (runs.len() - done.len()) as u32;
    let samples: Vec<f64> = done.iter().map(|r| r.cover_time as f64).collect();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = if samples.len() > 1 {
        samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (samples.len() - 1) as f64
    } else {
        0.0
    };
    let se = (var / samples.len() as f64).sqrt();
    let m = plan.set_count();
    let mut mean_active = vec![0.0; m];
    for r in &done {
        for (i, &s) in r.active_steps.iter().enumerate() {
            mean_active[i] += s as f64;
        }
    }
    for a in &mut mean_active {
        *a /= done.len() as f64;
    }
    Ok(GlobalReport {
        cover_time: EstimatorReport {
            trials,
            completed: done.len() as u32,
            capped,
            mean,
            std_error: se,
            ci95: (mean - 1.96 * se, mean + 1.96 * se),
            ci_method: "normal",
            seed,
            per_trial: runs
                .iter()
                .map(|r| r.as_ref().map(|r| r.cover_time as f64))
                .collect(),
        },
        mean_total_steps: done.iter().map(|r| r.total_steps as f64).sum::<f64>()
            / done.len() as f64,
        mean_active_steps: mean_active,
        decomposition_ok: done.iter().all(|r| r.cover_time <= r.total_steps),
        capped,
        per_run: runs
            .iter()
            .map(|r| r.as_ref().map(|r| (r.cover_time, r.total_steps)))
            .collect(),
    })
}

/// Twice the total weight of a region's field versus twice the max degree
/// times the power-graph closed neighborhood of its core. The left side
/// never exceeds the right.
pub fn weight_sum_bound(plan: &ExplorationPlan, graph: &Graph, i: usize) -> (f64, f64) {
    let lhs: f64 = 2.0
        * graph
            .edges()
            .map(|(u, v)| plan.edge_weight(i, u, v))
            .sum::<f64>();
    let rhs = 2.0 * plan.max_degree as f64 * plan.nplus_power(i) as f64;
    (lhs, rhs)
}

/// Effective-resistance bound inside a region: any two vertices of the
/// fattened set are connected by a unit-weight path of length at most
/// `k (2r+1)`, so their resistance in the region chain is at most that.
pub fn resistance_bound(plan: &ExplorationPlan) -> f64 {
    plan.power_exponent as f64 * (2.0 * plan.cover_radius as f64 + 1.0)
}

/// Samples vertex pairs from a region's fattened set and returns their exact
/// effective resistances in the region chain.
pub fn sample_region_resistances(
    plan: &ExplorationPlan,
    graph: &Graph,
    i: usize,
    pairs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>, ExploreError> {
    let wg = plan.region_weights(graph, i);
    let solver = chain::ResistanceSolver::new(&wg)?;
    let members: Vec<u32> = plan.fattened(i).iter().collect();
    let mut out = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let u = members[rng.gen_range(0..members.len())];
        let v = members[rng.gen_range(0..members.len())];
        out.push(solver.resistance(u, v)?.0);
    }
    Ok(out)
}

/// Local bound evidence for one region: Monte Carlo estimate of the time to
/// cover the fattened set and return to `x` under the region chain, with the
/// bound formulas it must stay under.
#[derive(Debug, Clone, Serialize)]
pub struct LocalBoundCheck {
    pub region: usize,
    pub cover_return_mean: f64,
    pub cover_return_se: f64,
    /// `32 (r+1) maxdeg eps^-1 |N+| log^2 n`
    pub cover_return_bound: f64,
    pub max_sampled_hitting: f64,
    /// `16 eps^-1 maxdeg |N+| (r+1) log n`
    pub hitting_bound: f64,
}

/// Estimates the cover-and-return time of region `i` from `x` and evaluates
/// the pairwise-hitting bound on sampled pairs.
#[allow(clippy::too_many_arguments)]
pub fn check_local_bounds(
    plan: &ExplorationPlan,
    graph: &Graph,
    i: usize,
    x: u32,
    trials: u32,
    sample_pairs: usize,
    seed: u64,
    cap: u64,
) -> Result<LocalBoundCheck, ExploreError> {
    let n = graph.vertex_count();
    let logn = (n as f64).log2();
    let fattened = plan.fattened(i);
    let dist = plan.dist_to_fattened(i);

    // cover-and-return trials under the region walk
    let samples: Vec<Option<u64>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng::stream(seed, trial);
            let mut covered = VertexSet::new(n);
            let mut remaining = fattened.len();
            let mut current = x;
            if fattened.contains(x) {
                covered.insert(x);
                remaining -= 1;
            }
            let mut t = 0u64;
            while t < cap {
                let nbrs = graph.neighbors(current);
                let next = if dist[current as usize] == 0 {
                    nbrs[rng.gen_range(0..nbrs.len())]
                } else {
                    // sample the region-chain law directly from the two
                    // neighbor groups
                    let level = dist[current as usize];
                    let closer = nbrs
                        .iter()
                        .filter(|&&w| dist[w as usize] + 1 == level)
                        .count();
                    let other = nbrs.len() - closer;
                    let decay = 1.0 - plan.eps;
                    let p_out = other as f64 * decay / (closer as f64 + other as f64 * decay);
                    let aim_out = other > 0 && rng.gen::<f64>() < p_out;
                    let (want, count) = if aim_out { (false, other) } else { (true, closer) };
                    let mut pick = rng.gen_range(0..count);
                    let mut chosen = None;
                    for &w in nbrs {
                        if (dist[w as usize] + 1 == level) == want {
                            if pick == 0 {
                                chosen = Some(w);
                                break;
                            }
                            pick -= 1;
                        }
                    }
                    chosen.expect("group member")
                };
                t += 1;
                if fattened.contains(next) && covered.insert(next) {
                    remaining -= 1;
                }
                current = next;
                if remaining == 0 && current == x {
                    return Some(t);
                }
            }
            None
        })
        .collect();
    let done: Vec<f64> = samples.iter().flatten().map(|&t| t as f64).collect();
    if done.is_empty() {
        return Err(ExploreError::AllTrialsCapped(cap));
    }
    let mean = done.iter().sum::<f64>() / done.len() as f64;
    let var = if done.len() > 1 {
        done.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (done.len() - 1) as f64
    } else {
        0.0
    };
    let se = (var / done.len() as f64).sqrt();

    // exact hitting times on sampled pairs
    let wg = plan.region_weights(graph, i);
    let members: Vec<u32> = fattened.iter().collect();
    let mut rng = rng::stream(seed, u64::MAX);
    let mut max_hit = 0.0f64;
    for _ in 0..sample_pairs {
        let u = members[rng.gen_range(0..members.len())];
        let v = members[rng.gen_range(0..members.len())];
        if u == v {
            continue;
        }
        let sol = chain::hitting_times(&wg, &VertexSet::from_iter(n, [v]))?;
        max_hit = max_hit.max(sol.values[u as usize]);
    }

    let scale = plan.max_degree as f64 * plan.nplus_power(i) as f64 / plan.eps
        * (plan.cover_radius as f64 + 1.0);
    Ok(LocalBoundCheck {
        region: i,
        cover_return_mean: mean,
        cover_return_se: se,
        cover_return_bound: 32.0 * scale * logn * logn,
        max_sampled_hitting: max_hit,
        hitting_bound: 16.0 * scale * logn,
    })
}

/// Pooled chi-square goodness-of-fit of the glued region subsequences
/// against the region-chain transition laws. Returns (statistic, degrees of
/// freedom, p-value).
pub fn transition_law_test(
    plan: &ExplorationPlan,
    graph: &Graph,
    traces: &[ExplorationTrace],
    min_expected: f64,
) -> (f64, usize, f64) {
    let m = plan.set_count();
    // counts[(region, vertex)] -> per-neighbor-index observations
    let mut counts: BTreeMap<(usize, u32), Vec<u64>> = BTreeMap::new();
    for trace in traces {
        for i in 0..m {
            let seq = trace.region_subsequence(plan, i);
            for pair in seq.windows(2) {
                let (v, w) = (pair[0], pair[1]);
                let idx = graph
                    .edge_index(v, w)
                    .expect("region subsequence steps along edges");
                counts
                    .entry((i, v))
                    .or_insert_with(|| vec![0; graph.degree(v)])
                    [idx] += 1;
            }
        }
    }
    let mut stat = 0.0;
    let mut df = 0usize;
    for ((region, v), obs) in counts {
        let total: u64 = obs.iter().sum();
        let probs = plan.transition_row(graph, region, v);
        // cells with enough mass stand alone; the light tail is pooled
        let mut big: Vec<(f64, f64)> = Vec::new();
        let mut tail = (0.0f64, 0.0f64);
        for (o, p) in obs.iter().zip(&probs) {
            let expected = total as f64 * p;
            if expected >= min_expected {
                big.push((*o as f64, expected));
            } else {
                tail.0 += *o as f64;
                tail.1 += expected;
            }
        }
        if tail.1 > 0.0 {
            if tail.1 >= min_expected {
                big.push(tail);
            } else if let Some(last) = big.last_mut() {
                last.0 += tail.0;
                last.1 += tail.1;
            }
        }
        if big.len() < 2 {
            continue;
        }
        for (o, e) in &big {
            stat += (o - e) * (o - e) / e;
        }
        df += big.len() - 1;
    }
    if df == 0 {
        return (stat, 0, 1.0);
    }
    let dist = ChiSquared::new(df as f64).expect("positive df");
    (stat, df, 1.0 - dist.cdf(stat))
}
