//! Property tests over random graphs: structural invariants of the graph
//! operations, law equivalence of the emulator strategy, solver identities,
//! and cover-builder certificates.

use proptest::prelude::*;

use tbrw_core::chain;
use tbrw_core::corpus::{random_connected, random_weights};
use tbrw_core::cover;
use tbrw_core::strategies::{one_step_law, total_variation, TowardSetBias};
use tbrw_core::{rng, weight_field, Graph, VertexSet};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..28, 0usize..24, any::<u64>()).prop_map(|(n, extra, seed)| {
        let mut r = rng::stream(seed, 0);
        random_connected(n, extra, &mut r)
    })
}

fn arb_anchor(g: &Graph, picks: &[u32]) -> VertexSet {
    let n = g.vertex_count();
    VertexSet::from_iter(n, picks.iter().map(|&p| p % n as u32).chain([0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_power_is_monotone(g in arb_graph(), k in 1i64..6) {
        let small = g.power(k).unwrap();
        let big = g.power(k + 1).unwrap();
        for (u, v) in small.edges() {
            prop_assert!(big.has_edge(u, v));
        }
        let diam_power = g.power(g.vertex_count() as i64).unwrap();
        let n = g.vertex_count();
        prop_assert_eq!(diam_power.edge_count(), n * (n - 1) / 2);
    }

    #[test]
    fn text_format_roundtrips(g in arb_graph()) {
        let text = g.to_text();
        let back = Graph::from_text(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn balls_nest_and_start_as_singletons(g in arb_graph(), v in any::<u32>(), r in 0u32..6) {
        let v = v % g.vertex_count() as u32;
        prop_assert_eq!(g.ball(v, 0).len(), 1);
        let inner = g.ball(v, r);
        let outer = g.ball(v, r + 1);
        prop_assert!(inner.is_subset_of(&outer));
    }

    #[test]
    fn emulator_law_matches_weighted_walk(
        g in arb_graph(),
        picks in proptest::collection::vec(any::<u32>(), 1..3),
        eps_idx in 0usize..4,
        v in any::<u32>(),
    ) {
        let eps = [0.1, 0.3, 0.5, 0.9][eps_idx];
        let anchor = arb_anchor(&g, &picks);
        let v = v % g.vertex_count() as u32;
        let wg = weight_field(&g, &anchor, eps).unwrap();
        let mut phi = TowardSetBias::new(&g, &anchor, eps);
        let law = one_step_law(&g, eps, &mut phi, v);
        let weighted = wg.transition_row(v);
        prop_assert!(total_variation(&law, &weighted) <= 1e-12);
    }

    #[test]
    fn hitting_stays_under_edge_bound(
        g in arb_graph(),
        picks in proptest::collection::vec(any::<u32>(), 1..3),
        eps_idx in 0usize..2,
        v in any::<u32>(),
    ) {
        let eps = [0.1, 0.5][eps_idx];
        let anchor = arb_anchor(&g, &picks);
        let v = v % g.vertex_count() as u32;
        let (lhs, rhs) = tbrw_core::bounds::hitting_edge_bound(&g, &anchor, eps, v).unwrap();
        prop_assert!(lhs <= rhs, "{lhs} > {rhs}");
        let (llhs, lrhs) = tbrw_core::bounds::hitting_localized_bound(&g, &anchor, eps, v).unwrap();
        prop_assert!(llhs <= lrhs, "{llhs} > {lrhs}");
    }

    #[test]
    fn commute_identity_holds(g in arb_graph(), seed in any::<u64>(), u in any::<u32>(), v in any::<u32>()) {
        let n = g.vertex_count() as u32;
        let (u, v) = (u % n, v % n);
        prop_assume!(u != v);
        let mut r = rng::stream(seed, 1);
        let wg = random_weights(g, &mut r);
        let residual = chain::commute_identity_residual(&wg, u, v).unwrap();
        let scale = 1.0 + wg.total_edge_weight();
        prop_assert!(residual <= 1e-8 * scale, "residual {residual}");
    }

    #[test]
    fn random_covers_validate(g in arb_graph(), levels in 1usize..4, seed in any::<u64>()) {
        let cover = cover::build_random_cover(&g, levels, seed, 100).unwrap();
        let report = cover::validate_cover(&g, &cover);
        prop_assert!(report.is_valid());
        prop_assert_eq!(cover.radius, (1u32 << (levels - 1)) - 1);
        let schedule = cover::CoverSchedule::new(g.vertex_count().max(2), levels).unwrap();
        prop_assert!(report.overlap <= schedule.overlap_threshold(g.vertex_count()));
    }

    #[test]
    fn stationary_sums_to_one_with_detailed_balance(g in arb_graph(), seed in any::<u64>()) {
        let mut r = rng::stream(seed, 2);
        let wg = random_weights(g, &mut r);
        let pi = chain::stationary(&wg).unwrap();
        prop_assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (u, v) in wg.graph().edges() {
            let a = pi[u as usize] * wg.transition(u, v);
            let b = pi[v as usize] * wg.transition(v, u);
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
