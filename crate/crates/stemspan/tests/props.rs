//! Property tests for the structural invariants.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use stemspan::graph::Graph;
use stemspan::invariants::{self, SigmaValue};
use stemspan::io;
use stemspan::limits::Limits;
use stemspan::tree::{self, TreeSubgraph};

fn lim() -> Limits {
    Limits::default()
}

/// Arbitrary simple graph on up to `max_n` vertices, from an edge mask.
fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let chosen: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&p, _)| p)
                .collect();
            Graph::new(n, &chosen).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn handshake(g in graph_strategy(10)) {
        let total: usize = (0..g.order()).map(|v| g.degree(v).unwrap()).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn triangle_inequality(g in graph_strategy(9)) {
        let d = g.all_pairs_distances();
        let n = g.order();
        for u in 0..n {
            for v in 0..n {
                let Some(duv) = d.get(u, v) else { continue };
                for w in 0..n {
                    if let (Some(duw), Some(dwv)) = (d.get(u, w), d.get(w, v)) {
                        prop_assert!(duv <= duw + dwv);
                    }
                }
            }
        }
    }

    #[test]
    fn distance_one_iff_edge(g in graph_strategy(9)) {
        let d = g.all_pairs_distances();
        for u in 0..g.order() {
            for v in 0..g.order() {
                if u != v {
                    prop_assert_eq!(d.get(u, v) == Some(1), g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn claw_recognizer_agrees_with_subset_force(g in graph_strategy(9)) {
        prop_assert_eq!(g.is_claw_free(), common::claw_free_by_subsets(&g));
    }

    #[test]
    fn serialize_parse_identity(g in graph_strategy(10)) {
        let text = io::serialize_edge_list(&g, &[]);
        let back = io::parse_edge_list(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(io::serialize_edge_list(&back, &[]), text);
    }

    #[test]
    fn alpha_two_is_the_independence_number(g in graph_strategy(8)) {
        prop_assume!(g.is_connected() && g.order() >= 1);
        let (a, _) = invariants::distance_independence_number(&g, 2, &lim()).unwrap();
        prop_assert_eq!(a, common::mis_by_bitmask(&g));
    }

    #[test]
    fn sigma_monotone_in_distance(g in graph_strategy(8)) {
        prop_assume!(g.is_connected() && g.order() >= 2);
        // Larger required distance admits fewer sets: the minimum cannot
        // drop, and infinity persists.
        for k in 1..=3usize {
            let mut prev = invariants::sigma(&g, 2, k, &lim()).unwrap().value;
            for l in 3..=5u32 {
                let cur = invariants::sigma(&g, l, k, &lim()).unwrap().value;
                match (prev, cur) {
                    (SigmaValue::Infinite, v) => prop_assert_eq!(v, SigmaValue::Infinite),
                    (SigmaValue::Finite(a), SigmaValue::Finite(b)) => prop_assert!(b >= a),
                    (SigmaValue::Finite(_), SigmaValue::Infinite) => {}
                }
                prev = cur;
            }
        }
    }

    #[test]
    fn sigma_witness_reverifies(g in graph_strategy(9), k in 1..=3usize) {
        prop_assume!(g.is_connected() && g.order() >= k);
        let r = invariants::sigma(&g, 3, k, &lim()).unwrap();
        if let (SigmaValue::Finite(sum), Some(w)) = (r.value, &r.witness_set) {
            prop_assert_eq!(w.len(), k);
            let d = g.all_pairs_distances();
            for i in 0..w.len() {
                for j in (i + 1)..w.len() {
                    prop_assert!(d.at_least(w[i], w[j], 3));
                }
            }
            let total: usize = w.iter().map(|&v| g.neighbors(v).len()).sum();
            prop_assert_eq!(total, sum);
        }
    }
}

// Random-tree invariants use the seeded generator instead of proptest
// shrinking; tree shapes are cheap to sample in bulk.

#[test]
fn stem_and_leaves_partition_the_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rand::Rng::random_range(&mut rng, 1..=40);
        let t = common::random_tree(&mut rng, n);
        let p = tree::stem_profile(&t);
        let mut union = p.leaves.clone();
        for &v in &p.stem_vertices {
            assert!(union.insert(v), "leaf and stem sets must be disjoint");
        }
        assert_eq!(&union, t.vertices());
        let classified = p.stem_leaves.len()
            + p.degree_two_stem.len()
            + p.stem_branch_vertices.len()
            + p.stem_degrees.values().filter(|&&d| d == 0).count();
        assert_eq!(classified, p.stem_vertices.len());
    }
}

#[test]
fn stem_is_a_connected_subtree() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let n = rand::Rng::random_range(&mut rng, 3..=40);
        let t = common::random_tree(&mut rng, n);
        let p = tree::stem_profile(&t);
        if p.stem_vertices.len() <= 1 {
            continue;
        }
        let stem_edges: std::collections::BTreeSet<stemspan::Edge> = t
            .edges()
            .iter()
            .copied()
            .filter(|e| p.stem_vertices.contains(&e.u) && p.stem_vertices.contains(&e.v))
            .collect();
        TreeSubgraph::new(t.host().clone(), p.stem_vertices.clone(), stem_edges)
            .expect("removing the leaves must leave a connected subtree");
    }
}

#[test]
fn stem_leaf_count_bounds_branch_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut seen_branching = 0;
    for _ in 0..500 {
        let n = rand::Rng::random_range(&mut rng, 4..=40);
        let t = common::random_tree(&mut rng, n);
        let p = tree::stem_profile(&t);
        if p.stem_vertices.len() >= 2 && !p.stem_branch_vertices.is_empty() {
            assert!(
                p.stem_leaf_count() >= p.branch_count() + 2,
                "stem with {} branch vertices has only {} stem leaves",
                p.branch_count(),
                p.stem_leaf_count()
            );
            seen_branching += 1;
        }
    }
    assert!(seen_branching > 50, "sample must include branching stems");
}

#[test]
fn singleton_host_graph_roundtrip() {
    let g = Graph::new(1, &[]).unwrap();
    let t = TreeSubgraph::singleton(Arc::new(g), 0).unwrap();
    assert!(t.is_spanning());
    assert_eq!(tree::tree_metrics(&t).order, 1);
}
