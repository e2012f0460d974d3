//! The biased-walk engine: single trials with optional step traces, and
//! seeded parallel Monte Carlo estimators for cover times, hitting times,
//! and visit counts.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::rng;
use crate::strategies::{tbrw_step, BiasStrategy, StepSource};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("every trial exceeded the step cap of {0}")]
    AllTrialsCapped(u64),
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("start vertex {0} is already in the target set")]
    DegenerateStart(u32),
}

/// Full record of one walk: the step log with per-step source flags and the
/// first-visit time of every vertex.
#[derive(Debug, Clone)]
pub struct WalkTrace {
    pub start: u32,
    pub eps: f64,
    pub seed: (u64, u64),
    pub steps: Vec<(u32, StepSource)>,
    pub first_visit: Vec<Option<u64>>,
}

impl WalkTrace {
    pub fn cover_time(&self) -> Option<u64> {
        self.first_visit.iter().copied().max().flatten()
    }

    /// Sequence of vertices including the start.
    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().map(|&(v, _)| v))
    }
}

/// What a single walk runs until.
#[derive(Clone, Copy)]
pub enum WalkGoal<'a> {
    /// all vertices visited
    Cover,
    /// first entry into the set (start counts at time 0)
    Hit(&'a VertexSet),
}

pub struct WalkRun {
    /// step count at which the goal was reached; None if the cap fired
    pub goal_at: Option<u64>,
    pub trace: Option<WalkTrace>,
}

/// Runs one biased walk until the goal or the cap. `record` keeps the full
/// step log.
#[allow(clippy::too_many_arguments)]
pub fn run_walk(
    graph: &Graph,
    eps: f64,
    strategy: &mut dyn BiasStrategy,
    start: u32,
    goal: WalkGoal,
    cap: u64,
    record: bool,
    seed: (u64, u64),
) -> WalkRun {
    let n = graph.vertex_count();
    let mut rng = rng::stream(seed.0, seed.1);
    strategy.begin(graph, start);

    let mut first_visit = vec![None; n];
    first_visit[start as usize] = Some(0);
    let mut unvisited = n as u64 - 1;
    let mut steps = record.then(Vec::new);

    match goal {
        WalkGoal::Cover if n == 1 => {
            return WalkRun {
                goal_at: Some(0),
                trace: steps.map(|s| WalkTrace {
                    start,
                    eps,
                    seed,
                    steps: s,
                    first_visit,
                }),
            }
        }
        WalkGoal::Hit(target) if target.contains(start) => {
            return WalkRun {
                goal_at: Some(0),
                trace: steps.map(|s| WalkTrace {
                    start,
                    eps,
                    seed,
                    steps: s,
                    first_visit,
                }),
            }
        }
        _ => {}
    }

    let mut current = start;
    let mut t: u64 = 0;
    let mut goal_at = None;
    while t < cap {
        let (next, source) = tbrw_step(graph, eps, strategy, current, &mut rng);
        strategy.on_step(graph, next, source);
        t += 1;
        if let Some(log) = steps.as_mut() {
            log.push((next, source));
        }
        if first_visit[next as usize].is_none() {
            first_visit[next as usize] = Some(t);
            unvisited -= 1;
        }
        current = next;
        let done = match goal {
            WalkGoal::Cover => unvisited == 0,
            WalkGoal::Hit(target) => target.contains(next),
        };
        if done {
            goal_at = Some(t);
            break;
        }
    }
    WalkRun {
        goal_at,
        trace: steps.map(|s| WalkTrace {
            start,
            eps,
            seed,
            steps: s,
            first_visit,
        }),
    }
}

/// Monte Carlo summary: mean with normal-approximation error bars, plus the
/// count of trials that hit the step cap (excluded from the mean).
#[derive(Debug, Clone, serde::Serialize)]
pub struct EstimatorReport {
    pub trials: u32,
    pub completed: u32,
    pub capped: u32,
    pub mean: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
    /// interval construction; always the normal approximation
    pub ci_method: &'static str,
    pub seed: u64,
    /// per-trial outcomes in trial order; None marks a capped trial
    #[serde(skip)]
    pub per_trial: Vec<Option<f64>>,
}

impl EstimatorReport {
    pub fn from_outcomes(outcomes: Vec<Option<f64>>, seed: u64) -> Self {
        let samples: Vec<f64> = outcomes.iter().copied().flatten().collect();
        let trials = outcomes.len() as u32;
        let capped = trials - samples.len() as u32;
        let m = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / m;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0)
        } else {
            0.0
        };
        let std_error = (var / m).sqrt();
        EstimatorReport {
            trials,
            completed: samples.len() as u32,
            capped,
            mean,
            std_error,
            ci95: (mean - 1.96 * std_error, mean + 1.96 * std_error),
            ci_method: "normal",
            seed,
            per_trial: outcomes,
        }
    }
}

/// Simulation knobs. The step cap defaults to a multiple of n^3.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub trials: u32,
    pub seed: u64,
    pub step_cap: u64,
}

impl SimOptions {
    pub fn new(trials: u32, seed: u64, n: usize) -> Self {
        SimOptions {
            trials,
            seed,
            step_cap: default_step_cap(n),
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.step_cap = cap;
        self
    }
}

/// 16 n^3, the documented default per-trial step budget.
pub fn default_step_cap(n: usize) -> u64 {
    16u64.saturating_mul((n as u64).saturating_pow(3)).max(1 << 16)
}

fn estimate<F>(opts: SimOptions, per_trial: F) -> Result<EstimatorReport, WalkError>
where
    F: Fn(u64) -> Option<f64> + Sync,
{
    if opts.trials == 0 {
        return Err(WalkError::NoTrials);
    }
    let outcomes: Vec<Option<f64>> = (0..opts.trials as u64)
        .into_par_iter()
        .map(&per_trial)
        .collect();
    if outcomes.iter().all(Option::is_none) {
        return Err(WalkError::AllTrialsCapped(opts.step_cap));
    }
    Ok(EstimatorReport::from_outcomes(outcomes, opts.seed))
}

/// Mean time for the biased walk to visit every vertex.
pub fn estimate_cover_time(
    graph: &Graph,
    eps: f64,
    strategy: &dyn BiasStrategy,
    start: u32,
    opts: SimOptions,
) -> Result<EstimatorReport, WalkError> {
    estimate(opts, |trial| {
        let mut phi = strategy.clone_strategy();
        run_walk(
            graph,
            eps,
            phi.as_mut(),
            start,
            WalkGoal::Cover,
            opts.step_cap,
            false,
            (opts.seed, trial),
        )
        .goal_at
        .map(|t| t as f64)
    })
}

/// Mean time for the biased walk to first enter the target set.
pub fn estimate_hitting_time(
    graph: &Graph,
    eps: f64,
    strategy: &dyn BiasStrategy,
    start: u32,
    target: &VertexSet,
    opts: SimOptions,
) -> Result<EstimatorReport, WalkError> {
    estimate(opts, |trial| {
        let mut phi = strategy.clone_strategy();
        run_walk(
            graph,
            eps,
            phi.as_mut(),
            start,
            WalkGoal::Hit(target),
            opts.step_cap,
            false,
            (opts.seed, trial),
        )
        .goal_at
        .map(|t| t as f64)
    })
}

/// Mean number of time steps spent in `counted` strictly before first
/// entering `absorbing` (the start counts at time zero).
pub fn estimate_visits_before_hit(
    graph: &Graph,
    eps: f64,
    strategy: &dyn BiasStrategy,
    start: u32,
    counted: &VertexSet,
    absorbing: &VertexSet,
    opts: SimOptions,
) -> Result<EstimatorReport, WalkError> {
    estimate(opts, |trial| {
        let mut phi = strategy.clone_strategy();
        let mut rng = rng::stream(opts.seed, trial);
        phi.begin(graph, start);
        let mut current = start;
        let mut visits: u64 = 0;
        let mut t = 0u64;
        while !absorbing.contains(current) {
            if counted.contains(current) {
                visits += 1;
            }
            if t >= opts.step_cap {
                return None;
            }
            let (next, source) = tbrw_step(graph, eps, phi.as_mut(), current, &mut rng);
            phi.on_step(graph, next, source);
            current = next;
            t += 1;
        }
        Some(visits as f64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain;
    use crate::generators;
    use crate::strategies::UniformBias;
    use crate::weights::WeightedGraph;

    #[test]
    fn two_vertex_cover_is_one_step() {
        let g = generators::path(2).unwrap();
        let report =
            estimate_cover_time(&g, 0.0, &UniformBias, 0, SimOptions::new(50, 3, 2)).unwrap();
        assert_eq!(report.mean, 1.0);
        assert_eq!(report.std_error, 0.0);
        assert_eq!(report.capped, 0);
    }

    #[test]
    fn complete_graph_cover_matches_coupon_collector() {
        let n = 8;
        let g = generators::complete(n).unwrap();
        let exact = (n as f64 - 1.0) * chain::harmonic(n - 1);
        let report =
            estimate_cover_time(&g, 0.0, &UniformBias, 0, SimOptions::new(4000, 11, n)).unwrap();
        assert!(
            (report.mean - exact).abs() <= 3.0 * report.std_error,
            "mean {} exact {} se {}",
            report.mean,
            exact,
            report.std_error
        );
    }

    #[test]
    fn path_cover_matches_exact_hitting_time() {
        // covering a path from one end means hitting the other end
        let n = 12;
        let g = generators::path(n).unwrap();
        let wg = WeightedGraph::uniform(g.clone());
        let exact = chain::hitting_times(&wg, &VertexSet::from_iter(n, [n as u32 - 1]))
            .unwrap()
            .values[0];
        let report =
            estimate_cover_time(&g, 0.0, &UniformBias, 0, SimOptions::new(3000, 12, n)).unwrap();
        assert!((report.mean - exact).abs() <= 3.0 * report.std_error);
    }

    #[test]
    fn hitting_from_target_is_zero() {
        let g = generators::path(4).unwrap();
        let target = VertexSet::from_iter(4, [1]);
        let report = estimate_hitting_time(&g, 0.3, &UniformBias, 1, &target, SimOptions::new(5, 1, 4))
            .unwrap();
        assert_eq!(report.mean, 0.0);
    }

    #[test]
    fn identical_seeds_reproduce_traces() {
        let g = generators::grid(3, 3).unwrap();
        let run = |seed| {
            let mut phi = UniformBias.clone_strategy();
            run_walk(
                &g,
                0.4,
                phi.as_mut(),
                0,
                WalkGoal::Cover,
                1 << 20,
                true,
                (seed, 0),
            )
            .trace
            .unwrap()
        };
        let a = run(99);
        let b = run(99);
        assert_eq!(a.steps, b.steps);
        let c = run(100);
        assert_ne!(a.steps, c.steps);
    }

    #[test]
    fn trace_invariants_hold() {
        let g = generators::grid(3, 4).unwrap();
        let mut phi = UniformBias.clone_strategy();
        let trace = run_walk(
            &g,
            0.2,
            phi.as_mut(),
            2,
            WalkGoal::Cover,
            1 << 20,
            true,
            (5, 0),
        )
        .trace
        .unwrap();
        let verts: Vec<u32> = trace.vertices().collect();
        for pair in verts.windows(2) {
            assert!(g.has_edge(pair[0], pair[1]));
        }
        for (v, &fv) in trace.first_visit.iter().enumerate() {
            let t = fv.expect("covered walk visits everything") as usize;
            assert_eq!(verts[t], v as u32);
            assert!(!verts[..t].contains(&(v as u32)));
        }
        assert_eq!(
            trace.cover_time().unwrap(),
            trace.first_visit.iter().map(|v| v.unwrap()).max().unwrap()
        );
    }

    #[test]
    fn cap_failures_are_reported() {
        let g = generators::path(30).unwrap();
        let target = VertexSet::from_iter(30, [29]);
        let err = estimate_hitting_time(
            &g,
            0.0,
            &UniformBias,
            0,
            &target,
            SimOptions::new(4, 2, 30).with_cap(3),
        )
        .unwrap_err();
        assert!(matches!(err, WalkError::AllTrialsCapped(3)));
    }
}
