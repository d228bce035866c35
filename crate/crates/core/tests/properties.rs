use irvzone::graph::{all_pairs_distances, parse_edge_list, parse_graph6, to_graph6, EdgeListOptions};
use irvzone::irv::{run_irv, TiebreakPolicy};
use irvzone::{Electorate, Graph, NodeSet};
use num_rational::BigRational;
use proptest::prelude::*;

/// A connected graph: a random spanning tree plus random extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
        let extra = proptest::collection::vec((0..n, 0..n), 0..2 * n);
        (parents, extra).prop_map(move |(parents, extra)| {
            let mut edges: Vec<(usize, usize)> =
                parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a != b));
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn graph_and_candidates(max_n: usize) -> impl Strategy<Value = (Graph, NodeSet)> {
    connected_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        proptest::collection::btree_set(0..n, 1..=n)
            .prop_map(move |c| (g.clone(), c.into_iter().collect()))
    })
}

proptest! {
    #[test]
    fn distances_form_a_metric(g in connected_graph(20)) {
        let d = all_pairs_distances(&g).unwrap();
        for u in 0..g.n() {
            prop_assert_eq!(d.get(u, u), 0);
            for v in 0..g.n() {
                prop_assert_eq!(d.get(u, v), d.get(v, u));
                if u != v {
                    prop_assert!(d.get(u, v) >= 1);
                }
                for w in 0..g.n() {
                    prop_assert!(d.get(u, w) <= d.get(u, v) + d.get(v, w));
                }
            }
        }
    }

    #[test]
    fn graph6_round_trips(g in connected_graph(80)) {
        let back = parse_graph6(&to_graph6(&g)).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn shares_sum_to_the_electorate((g, c) in graph_and_candidates(40)) {
        let e = Electorate::new(g).unwrap();
        let s = e.shares(&c).unwrap();
        prop_assert_eq!(s.total(), BigRational::from_integer(e.n().into()));
        prop_assert!(s.weakly_minimal().is_subset(&c));
    }

    #[test]
    fn edge_list_order_does_not_matter(g in connected_graph(15), rot in 0usize..50) {
        let lines: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a} {b}")).collect();
        let mut rotated = lines.clone();
        if !rotated.is_empty() {
            let k = rot % rotated.len();
            rotated.rotate_left(k);
            rotated.reverse();
        }
        let a = parse_edge_list(&lines.join("\n"), EdgeListOptions::default());
        let b = parse_edge_list(&rotated.join("\n"), EdgeListOptions::default());
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.edges(), b.edges());
                prop_assert_eq!(a.labels(), b.labels());
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn seeded_elections_are_reproducible((g, c) in graph_and_candidates(25), seed in any::<u64>()) {
        let e = Electorate::new(g).unwrap();
        let a = run_irv(&e, &c, &TiebreakPolicy::Seeded(seed)).unwrap();
        let b = run_irv(&e, &c, &TiebreakPolicy::Seeded(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}
