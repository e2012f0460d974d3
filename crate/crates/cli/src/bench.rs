//! The `bench` suite: one deterministic pass over every inequality family
//! the library implements, at sizes that finish in seconds. Each row records
//! what was measured, what it must satisfy, and whether it did.

use anyhow::Result;
use serde::Serialize;

use tbrw_core::bounds;
use tbrw_core::chain;
use tbrw_core::corpus;
use tbrw_core::cover::{
    self, build_random_cover, build_sqrtlog_cover, radius2_expansion_holds,
    radius3_expansion_holds, sample_bounded_radius_set, singleton_cover, validate_cover, Cover,
    CoverSchedule, CoverSet,
};
use tbrw_core::explore::{
    self, build_plan, choose_power_exponent, run_global, transition_law_test, ExplorationPlan,
};
use tbrw_core::generators;
use tbrw_core::graph::Graph;
use tbrw_core::rng;
use tbrw_core::strategies::{one_step_law, total_variation, NaiveTowardBias, TowardSetBias};
use tbrw_core::walk::{
    estimate_cover_time, estimate_hitting_time, estimate_visits_before_hit, SimOptions,
};
use tbrw_core::weights::weight_field;
use tbrw_core::VertexSet;

use crate::artifacts::Meta;

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub id: &'static str,
    pub description: &'static str,
    pub observed: f64,
    pub requirement: f64,
    pub pass: bool,
}

impl BoundRow {
    fn at_most(id: &'static str, description: &'static str, observed: f64, requirement: f64) -> Self {
        BoundRow {
            id,
            description,
            observed,
            requirement,
            pass: observed <= requirement,
        }
    }

    fn above(id: &'static str, description: &'static str, observed: f64, requirement: f64) -> Self {
        BoundRow {
            id,
            description,
            observed,
            requirement,
            pass: observed > requirement,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub meta: Meta,
    pub suite: String,
    pub rows: Vec<BoundRow>,
    pub all_pass: bool,
}

/// The fixed small instance for the excision law test: a 64-cycle under a
/// strong bias, covered by four arcs of its 8th power, which makes every
/// region a proper subset with genuinely decaying weights.
pub fn law_test_instance() -> (Graph, ExplorationPlan) {
    let g = generators::cycle(64).unwrap();
    let eps = 0.875;
    let k = choose_power_exponent(eps, 64).unwrap();
    assert_eq!(k, 8);
    let arc = |center: i64| -> Vec<u32> {
        (-8..=8).map(|d| (center + d).rem_euclid(64) as u32).collect()
    };
    let cover = Cover {
        radius: 1,
        levels: 0,
        sets: [0i64, 16, 32, 48]
            .iter()
            .map(|&c| CoverSet {
                center: c as u32,
                level: None,
                vertices: arc(c),
            })
            .collect(),
    };
    let plan = build_plan(&g, eps, 0, &cover).unwrap();
    (g, plan)
}

pub fn bench_suite(seed: u64, meta: Meta) -> Result<BoundReport> {
    let mut rows = Vec::new();

    rows.push(emulation_tv(rng::derive(seed, 1)));
    rows.extend(hitting_bounds(rng::derive(seed, 2)));
    rows.extend(layered_rows(rng::derive(seed, 3)));
    rows.push(layer_decomposition(rng::derive(seed, 4)));
    rows.extend(cover_rows(rng::derive(seed, 5)));
    rows.extend(expansion_rows(rng::derive(seed, 6)));
    rows.push(singleton_sharpness());
    rows.extend(explore_rows(rng::derive(seed, 7))?);
    rows.push(excision_law(rng::derive(seed, 8))?);
    rows.push(spanning_linear(rng::derive(seed, 9))?);
    rows.push(mc_exact_hitting(rng::derive(seed, 10))?);
    rows.push(commute_identity(rng::derive(seed, 11)));

    let all_pass = rows.iter().all(|r| r.pass);
    Ok(BoundReport {
        meta,
        suite: "paper-bounds".into(),
        rows,
        all_pass,
    })
}

fn emulation_tv(seed: u64) -> BoundRow {
    let mut rng = rng::stream(seed, 0);
    let mut worst = 0.0f64;
    for trial in 0..60u32 {
        use rand::Rng;
        let n = 4 + (trial as usize * 7) % 40;
        let g = corpus::random_connected(n, trial as usize % 12, &mut rng);
        let eps = [0.1, 0.3, 0.5, 0.9][trial as usize % 4];
        let anchor = VertexSet::from_iter(
            n,
            (0..=(trial % 3)).map(|_| rng.gen_range(0..n as u32)).chain([0]),
        );
        let wg = weight_field(&g, &anchor, eps).unwrap();
        let mut phi = TowardSetBias::new(&g, &anchor, eps);
        let v = rng.gen_range(0..n as u32);
        let law = one_step_law(&g, eps, &mut phi, v);
        worst = worst.max(total_variation(&law, &wg.transition_row(v)));
    }
    BoundRow::at_most(
        "emulation-tv",
        "one-step law of the emulator strategy vs the weighted walk, worst total variation",
        worst,
        1e-12,
    )
}

fn hitting_bounds(seed: u64) -> Vec<BoundRow> {
    use rand::Rng;
    let corpus = corpus::small_corpus(seed);
    let mut rng = rng::stream(seed, 1);
    let mut worst_edge = 0.0f64;
    let mut worst_local = 0.0f64;
    for item in corpus.iter().step_by(3) {
        let g = &item.graph;
        let n = g.vertex_count();
        for _ in 0..4 {
            let anchor = VertexSet::from_iter(
                n,
                (0..1 + rng.gen_range(0..3u32)).map(|_| rng.gen_range(0..n as u32)),
            );
            let v = rng.gen_range(0..n as u32);
            for &eps in &[0.1, 0.5] {
                let (lhs, rhs) = bounds::hitting_edge_bound(g, &anchor, eps, v).unwrap();
                worst_edge = worst_edge.max(lhs / rhs);
                let (lhs, rhs) = bounds::hitting_localized_bound(g, &anchor, eps, v).unwrap();
                worst_local = worst_local.max(lhs / rhs);
            }
        }
    }
    vec![
        BoundRow::at_most(
            "hitting-edge-bound",
            "exact anchored hitting time over 2 e(G)/eps, worst ratio",
            worst_edge,
            1.0,
        ),
        BoundRow::at_most(
            "hitting-localized-bound",
            "exact anchored hitting time over the localized 2 (e(G[W])+1)/eps, worst ratio",
            worst_local,
            1.0,
        ),
    ]
}

fn layered_rows(seed: u64) -> Vec<BoundRow> {
    // closed form of the stationary ratio
    let mut worst_rel = 0.0f64;
    for &eps in &[0.0, 0.01, 0.05] {
        for k in 4..=8 {
            let got = chain::layered_visit_ratio(eps, k).unwrap();
            let want = chain::layered_weight_ratio(eps).powi(k as i32 - 3);
            worst_rel = worst_rel.max((got - want).abs() / want);
        }
    }
    // the ratio never dips below its linear floor
    let mut floor_margin = f64::INFINITY;
    for i in 0..=100 {
        let eps = i as f64 * 0.002;
        floor_margin =
            floor_margin.min(chain::layered_weight_ratio(eps) - 4.0 * (1.0 - 5.0 * eps));
    }
    // Monte Carlo visits to the top layer before the bottom one
    let (g, layers) = generators::layered(14).unwrap();
    let layer_set = |idx: u32| {
        VertexSet::from_iter(
            14,
            layers
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == idx)
                .map(|(v, _)| v as u32),
        )
    };
    let bottom = layer_set(1);
    let top = layer_set(3);
    let start = layers.iter().position(|&l| l == 2).unwrap() as u32;
    let eps = 0.05;
    let phi = NaiveTowardBias::new(&g, &bottom);
    let report = estimate_visits_before_hit(
        &g,
        eps,
        &phi,
        start,
        &top,
        &bottom,
        SimOptions::new(2000, seed, 14),
    )
    .unwrap();
    let closed = chain::layered_weight_ratio(eps);
    vec![
        BoundRow::at_most(
            "layered-ratio-closed-form",
            "stationary-ratio route vs the closed form, worst relative error",
            worst_rel,
            1e-9,
        ),
        BoundRow::at_most(
            "layered-ratio-floor",
            "negative margin of the layer weight ratio over 4(1-5 eps) on an eps grid",
            (-floor_margin).max(0.0),
            1e-12,
        ),
        BoundRow::at_most(
            "layered-visits-mc",
            "top-layer visit count vs the closed form, in standard errors",
            (report.mean - closed).abs(),
            3.0 * report.std_error,
        ),
    ]
}

fn layer_decomposition(seed: u64) -> BoundRow {
    let mut rng = rng::stream(seed, 0);
    let mut worst = 0.0f64;
    for trial in 0..12 {
        use rand::Rng;
        let n = 6 + trial;
        let g = corpus::random_connected(n, trial % 7, &mut rng);
        let anchor = VertexSet::from_iter(n, [rng.gen_range(0..n as u32)]);
        for &eps in &[0.1, 0.5] {
            for check in bounds::layer_hitting_bounds(&g, &anchor, eps).unwrap() {
                worst = worst.max(check.max_hitting / check.weight_sum);
            }
        }
    }
    BoundRow::at_most(
        "layer-decomposition-bound",
        "worst layer hitting time over twice the layer chain's weight, all layers",
        worst,
        1.0 + 1e-9,
    )
}

fn cover_rows(seed: u64) -> Vec<BoundRow> {
    let mut stream = rng::stream(seed, 2);
    let graphs: Vec<(&str, Graph)> = vec![
        ("cycle-256", generators::cycle(256).unwrap()),
        ("grid-16x16", generators::grid(16, 16).unwrap()),
        (
            "regular3-256",
            generators::random_regular_connected(256, 3, &mut stream).unwrap(),
        ),
        ("tree-255", generators::binary_tree(255).unwrap()),
        ("layered-126", generators::layered(126).unwrap().0),
        ("cayley2-p7", generators::affine_cayley_radius2(7).unwrap().graph),
    ];
    let mut worst_overlap = 0.0f64;
    let mut invalid = 0u32;
    for (idx, (_, g)) in graphs.iter().enumerate() {
        for levels in [2usize, 3] {
            let cover =
                build_random_cover(g, levels, rng::derive(seed, 100 + idx as u64), 100).unwrap();
            let report = validate_cover(g, &cover);
            if !report.is_valid() || cover.radius != (1 << (levels - 1)) - 1 {
                invalid += 1;
            }
            let threshold = CoverSchedule::new(g.vertex_count(), levels)
                .unwrap()
                .overlap_threshold(g.vertex_count());
            worst_overlap = worst_overlap.max(report.overlap / threshold);
        }
    }
    // the per-vertex eligible-ball claim
    let mut missing = 0u32;
    let mut rng2 = rng::stream(seed, 3);
    for trial in 0..10 {
        use rand::Rng;
        let n = 20 + rng2.gen_range(0..180usize);
        let g = corpus::random_connected(n, trial * 3, &mut rng2);
        for levels in 2..=4 {
            let schedule = CoverSchedule::new(n, levels).unwrap();
            let eligible = schedule.eligible_levels(&g);
            for v in g.vertices() {
                if cover::greedy_ball_claim_level(&g, v, &schedule, &eligible).is_none() {
                    missing += 1;
                }
            }
        }
    }
    vec![
        BoundRow::at_most(
            "cover-build-valid",
            "randomized covers failing validation or the radius certificate",
            invalid as f64,
            0.0,
        ),
        BoundRow::at_most(
            "cover-overlap-bound",
            "accepted cover overlap over 4 k n^(1/k) log^(1+1/k) n, worst ratio",
            worst_overlap,
            1.0,
        ),
        BoundRow::at_most(
            "cover-claim-level",
            "vertices with no level whose shrunken ball holds a threshold of eligible centers",
            missing as f64,
            0.0,
        ),
    ]
}

fn expansion_rows(seed: u64) -> Vec<BoundRow> {
    use rand::Rng;
    let mut violations2 = 0u32;
    let mut rng = rng::stream(seed, 4);
    for p in [3u64, 5] {
        let c = generators::affine_cayley_radius2(p).unwrap();
        let n = c.graph.vertex_count();
        for _ in 0..200 {
            let center = rng.gen_range(0..n as u32);
            let set = sample_bounded_radius_set(&c.graph, center, 2, &mut rng);
            let (lhs, rhs) = radius2_expansion_holds(&c, &set, center).unwrap();
            if lhs < rhs {
                violations2 += 1;
            }
        }
    }
    let mut violations3 = 0u32;
    let c = generators::affine_cayley_radius3(3).unwrap();
    let n = c.graph.vertex_count();
    for _ in 0..100 {
        let center = rng.gen_range(0..n as u32);
        let set = sample_bounded_radius_set(&c.graph, center, 3, &mut rng);
        let (lhs, rhs) = radius3_expansion_holds(&c, &set, center).unwrap();
        if lhs < rhs {
            violations3 += 1;
        }
    }
    vec![
        BoundRow::at_most(
            "radius2-expansion",
            "sampled radius-2 sets violating the (p-1)/4 second-part expansion",
            violations2 as f64,
            0.0,
        ),
        BoundRow::at_most(
            "radius3-expansion",
            "sampled radius-3 sets violating the (p-1)/27 second-part expansion",
            violations3 as f64,
            0.0,
        ),
    ]
}

fn singleton_sharpness() -> BoundRow {
    let mut worst = 0.0f64;
    for n in 2..=10 {
        let g = generators::complete(n).unwrap();
        let report = validate_cover(&g, &singleton_cover(&g));
        worst = worst.max((report.overlap - n as f64).abs());
    }
    BoundRow::at_most(
        "singleton-cover-sharp",
        "overlap of the radius-0 cover of complete graphs vs n, worst deviation",
        worst,
        1e-12,
    )
}

fn explore_rows(seed: u64) -> Result<Vec<BoundRow>> {
    let eps = 0.5;
    let mut bad_runs = 0u32;
    let mut worst_mean = 0.0f64;
    let mut worst_wtsum = 0.0f64;
    let mut worst_reff = 0.0f64;
    for (idx, g) in [generators::cycle(64).unwrap(), generators::grid(8, 8).unwrap()]
        .into_iter()
        .enumerate()
    {
        let salt = rng::derive(seed, idx as u64);
        let k = choose_power_exponent(eps, g.vertex_count())?;
        let power = g.power(k as i64)?;
        let cover = build_sqrtlog_cover(&power, salt, 100).unwrap();
        let plan = build_plan(&g, eps, 0, &cover)?;
        let cap = (plan.global_bound(g.vertex_count()) * 64.0) as u64;
        let report = run_global(&plan, &g, 40, salt, cap)?;
        if !report.decomposition_ok || report.capped > 0 {
            bad_runs += 1;
        }
        worst_mean = worst_mean.max(report.cover_time.mean / plan.global_bound(g.vertex_count()));
        for i in 0..plan.set_count() {
            let (lhs, rhs) = explore::weight_sum_bound(&plan, &g, i);
            worst_wtsum = worst_wtsum.max(lhs / rhs);
        }
        let mut rng = rng::stream(salt, 9);
        let reff_bound = explore::resistance_bound(&plan);
        for i in 0..plan.set_count().min(4) {
            for r in explore::sample_region_resistances(&plan, &g, i, 5, &mut rng)? {
                worst_reff = worst_reff.max(r / reff_bound);
            }
        }
    }
    Ok(vec![
        BoundRow::at_most(
            "explore-decomposition",
            "exploration runs whose cover time exceeded the active-step total, or capped",
            bad_runs as f64,
            0.0,
        ),
        BoundRow::at_most(
            "explore-global-bound",
            "mean exploration cover time over 32 eps^-1 maxdeg (r+1) K n log^2 n, worst ratio",
            worst_mean,
            1.0,
        ),
        BoundRow::at_most(
            "explore-weight-sum",
            "twice the region weight over 2 maxdeg |N+(core)| in the power graph, worst ratio",
            worst_wtsum,
            1.0 + 1e-9,
        ),
        BoundRow::at_most(
            "explore-resistance",
            "sampled region resistance over k (2r+1), worst ratio",
            worst_reff,
            1.0 + 1e-8,
        ),
    ])
}

fn excision_law(seed: u64) -> Result<BoundRow> {
    let (g, plan) = law_test_instance();
    let mut traces = Vec::new();
    let mut pooled = 0usize;
    let mut trial = 0u64;
    while pooled < 10_000 {
        let (_, trace) = explore::run_exploration_traced(&plan, &g, (seed, trial), 1 << 24)?;
        pooled += trace.steps.len();
        traces.push(trace);
        trial += 1;
    }
    let (_, _, p) = transition_law_test(&plan, &g, &traces, 5.0);
    Ok(BoundRow::above(
        "excision-law-chisq",
        "p-value of the glued region subsequences against the region chain laws",
        p,
        0.001,
    ))
}

fn spanning_linear(seed: u64) -> Result<BoundRow> {
    let eps = 0.5;
    let mut worst = 0.0f64;
    for side in [8usize, 16] {
        let g = generators::grid(side, side).unwrap();
        let n = g.vertex_count();
        let strat = tbrw_core::strategies::SpanningWalkBias::new(&g, eps, 0);
        let report = estimate_cover_time(
            &g,
            eps,
            &strat,
            0,
            SimOptions::new(150, rng::derive(seed, side as u64), n),
        )?;
        let growth = bounds::growth_decay_sum(&g, eps);
        let linear_factor = 4.0 * growth * growth / (1.0 - eps);
        worst = worst.max(report.mean / (linear_factor * n as f64));
    }
    Ok(BoundRow::at_most(
        "spanning-walk-linear",
        "mean spanning-tour cover time over 4 L^2 (1-eps)^-1 n, worst ratio",
        worst,
        1.0,
    ))
}

fn mc_exact_hitting(seed: u64) -> Result<BoundRow> {
    use rand::Rng;
    let mut rng = rng::stream(seed, 5);
    let mut worst = 0.0f64;
    for trial in 0..4u64 {
        let n = 12 + trial as usize * 5;
        let g = corpus::random_connected(n, 2 + trial as usize, &mut rng);
        let eps = [0.3, 0.6][trial as usize % 2];
        let anchor = VertexSet::from_iter(n, [rng.gen_range(0..n as u32)]);
        let exact = {
            let wg = weight_field(&g, &anchor, eps)?;
            chain::hitting_times(&wg, &anchor)?
        };
        let start = (0..n as u32)
            .max_by_key(|&v| exact.values[v as usize] as u64)
            .unwrap();
        let phi = TowardSetBias::new(&g, &anchor, eps);
        let report = estimate_hitting_time(
            &g,
            eps,
            &phi,
            start,
            &anchor,
            SimOptions::new(4000, rng::derive(seed, 50 + trial), n),
        )?;
        let diff = (report.mean - exact.values[start as usize]).abs();
        worst = worst.max(diff / (3.0 * report.std_error));
    }
    Ok(BoundRow::at_most(
        "mc-exact-hitting",
        "Monte Carlo hitting estimate vs the linear solver, worst |diff| in 3-SE units",
        worst,
        1.0,
    ))
}

fn commute_identity(seed: u64) -> BoundRow {
    use rand::Rng;
    let mut rng = rng::stream(seed, 6);
    let mut worst = 0.0f64;
    for trial in 0..10 {
        let n = 8 + trial * 2;
        let g = corpus::random_connected(n, trial, &mut rng);
        let wg = corpus::random_weights(g, &mut rng);
        let u = rng.gen_range(0..n as u32);
        let v = (u + 1 + rng.gen_range(0..n as u32 - 1)) % n as u32;
        let residual = chain::commute_identity_residual(&wg, u, v).unwrap();
        worst = worst.max(residual / (1.0 + wg.total_edge_weight()));
    }
    BoundRow::at_most(
        "commute-identity",
        "commute-time identity residual relative to the chain's weight scale",
        worst,
        1e-8,
    )
}
