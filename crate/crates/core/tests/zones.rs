mod common;

use common::{mask_of, set_of, Oracle};
use irvzone::enumerate::enumerate_connected_graphs;
use irvzone::families::{build_family, FamilySpec};
use irvzone::zone::{
    all_exclusion_zones, build_loss_graph, condorcet_positions, is_exclusion_zone,
    is_exclusion_zone_pruned, minimal_exclusion_zone, rx3c_gadget, Rx3cInstance, SearchLimits,
    Verdict, ZoneError, ZoneKind, DEFAULT_CHECKER_CAP, DEFAULT_PRUNED_BUDGET,
};
use irvzone::{Electorate, NodeSet};

fn electorate(spec: FamilySpec) -> Electorate {
    Electorate::new(build_family(spec).unwrap()).unwrap()
}

fn set(v: &[usize]) -> NodeSet {
    v.iter().copied().collect()
}

fn check(e: &Electorate, s: &[usize]) -> Verdict {
    is_exclusion_zone(e, &set(s), DEFAULT_CHECKER_CAP).unwrap().verdict
}

#[test]
fn named_zone_checks() {
    let bistar = electorate(FamilySpec::Bistar(3));
    assert_eq!(check(&bistar, &[0, 1]), Verdict::IsZone);
    let p6 = electorate(FamilySpec::Path(6));
    assert_eq!(check(&p6, &[1, 2, 3, 4]), Verdict::IsZone);
    let r = is_exclusion_zone(&p6, &set(&[2, 3]), DEFAULT_CHECKER_CAP).unwrap();
    assert_eq!(r.verdict, Verdict::NotZone);
    assert!(r.counterexample.unwrap().replays(&p6));
    for spec in [FamilySpec::Path(5), FamilySpec::Cycle(6), FamilySpec::Bistar(2)] {
        let e = electorate(spec);
        assert_eq!(check(&e, &e.all_nodes().to_vec()), Verdict::IsZone);
    }
}

#[test]
fn named_minimal_zones() {
    let l = SearchLimits::default();
    let p6 = minimal_exclusion_zone(&electorate(FamilySpec::Path(6)), l).unwrap();
    assert_eq!(p6.zone, set(&[1, 2, 3, 4]));
    assert_eq!(p6.kind, ZoneKind::Minimal);
    let c4 = minimal_exclusion_zone(&electorate(FamilySpec::Cycle(4)), l).unwrap();
    assert_eq!(c4.kind, ZoneKind::Trivial);
    assert_eq!(c4.zone.len(), 4);
    let tree = minimal_exclusion_zone(&electorate(FamilySpec::PerfectBinaryTree(2)), l).unwrap();
    assert_eq!(tree.zone, set(&[0, 1, 2]));
}

#[test]
fn loss_graph_examples() {
    let p3 = electorate(FamilySpec::Path(3));
    let l = build_loss_graph(&p3);
    let mut arcs = l.arcs();
    arcs.sort_unstable();
    assert_eq!(arcs, [(0, 1), (0, 2), (2, 0), (2, 1)]);
    assert_eq!(l.closure(&set(&[1])), set(&[1]));
    assert_eq!(l.closure(&set(&[0])), set(&[0, 1, 2]));

    let c4 = electorate(FamilySpec::Cycle(4));
    assert_eq!(build_loss_graph(&c4).arcs().len(), 12);
    let k2 = electorate(FamilySpec::Path(2));
    assert_eq!(build_loss_graph(&k2).arcs().len(), 2);
}

#[test]
fn condorcet_examples() {
    let (w, l) = condorcet_positions(&electorate(FamilySpec::Path(6)));
    assert_eq!((w, l), (set(&[2, 3]), set(&[0, 5])));
    let c4 = electorate(FamilySpec::Cycle(4));
    assert_eq!(condorcet_positions(&c4), (c4.all_nodes(), c4.all_nodes()));
    // Star with hub 0.
    let star = Electorate::new(irvzone::Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()).unwrap();
    assert_eq!(condorcet_positions(&star), (set(&[0]), set(&[1, 2, 3])));
}

#[test]
fn all_zones_examples() {
    let k2 = electorate(FamilySpec::Path(2));
    assert_eq!(all_exclusion_zones(&k2, 10).unwrap(), [set(&[0, 1])]);
    let p4 = all_exclusion_zones(&electorate(FamilySpec::Path(4)), 10).unwrap();
    assert_eq!(p4[0], set(&[1, 2]));
    assert!(matches!(
        all_exclusion_zones(&electorate(FamilySpec::Path(12)), 10),
        Err(ZoneError::TooLarge { n: 12, .. })
    ));
}

#[test]
fn invalid_zone_requests() {
    let p6 = electorate(FamilySpec::Path(6));
    assert_eq!(
        is_exclusion_zone(&p6, &NodeSet::new(), 25).unwrap_err(),
        ZoneError::EmptySet
    );
    assert!(is_exclusion_zone(&p6, &set(&[9]), 25).is_err());
    assert_eq!(
        is_exclusion_zone(&p6, &set(&[0]), 3).unwrap_err(),
        ZoneError::CapExceeded { c: 5, cap: 3 }
    );
    let big = electorate(FamilySpec::Path(70));
    assert_eq!(
        is_exclusion_zone(&big, &set(&[0, 1, 2, 3]), 1000).unwrap_err(),
        ZoneError::CapExceeded { c: 66, cap: 63 }
    );
}

#[test]
fn checkers_match_the_oracle_on_small_graphs() {
    for n in 1..=5 {
        for g in enumerate_connected_graphs(n).unwrap() {
            let e = Electorate::new(g.clone()).unwrap();
            let mut oracle = Oracle::new(&g);
            for s in 1..1u32 << n {
                let fast = is_exclusion_zone(&e, &set_of(s), n).unwrap();
                assert_eq!(fast.is_zone(), oracle.is_zone(s), "{g:?} {s:b}");
                let pruned = is_exclusion_zone_pruned(&e, &set_of(s), DEFAULT_PRUNED_BUDGET).unwrap();
                assert_eq!(pruned.verdict, fast.verdict);
                for cx in [fast.counterexample, pruned.counterexample].into_iter().flatten() {
                    assert!(cx.replays(&e));
                    assert!(s >> cx.eliminated & 1 == 1);
                    assert_eq!(mask_of(&cx.opponents) & s, 0);
                }
            }
        }
    }
}

#[test]
fn pruned_checker_agrees_on_six_node_graphs() {
    for g in enumerate_connected_graphs(6).unwrap() {
        let e = Electorate::new(g).unwrap();
        for s in 1..1u128 << 6 {
            let s = NodeSet::from_u128(s);
            assert_eq!(
                is_exclusion_zone(&e, &s, 6).unwrap().verdict,
                is_exclusion_zone_pruned(&e, &s, DEFAULT_PRUNED_BUDGET).unwrap().verdict
            );
        }
    }
}

#[test]
fn zones_are_nested_and_loss_closed() {
    for n in 2..=6 {
        for g in enumerate_connected_graphs(n).unwrap() {
            let e = Electorate::new(g).unwrap();
            let loss = build_loss_graph(&e);
            let zones = all_exclusion_zones(&e, 6).unwrap();
            for w in zones.windows(2) {
                assert!(w[0].is_subset(&w[1]), "{:?} ⊄ {:?}", w[0], w[1]);
            }
            for z in &zones {
                assert_eq!(&loss.closure(z), z);
            }
        }
    }
}

#[test]
fn minimal_zone_is_the_smallest_zone() {
    for n in 1..=6 {
        for g in enumerate_connected_graphs(n).unwrap() {
            let e = Electorate::new(g.clone()).unwrap();
            let report = minimal_exclusion_zone(&e, SearchLimits::default()).unwrap();
            let expected = Oracle::new(&g).minimal_zone();
            assert_eq!(mask_of(&report.zone), expected, "{g:?}");
            assert!(report.seed_winners.is_subset(&report.zone));
            assert_eq!(report.kind == ZoneKind::Trivial, report.zone.len() == n);
        }
    }
}

#[test]
fn search_budget_is_enforced() {
    let e = electorate(FamilySpec::Cycle(7));
    let limits = SearchLimits {
        winner_budget: 2,
        ..SearchLimits::default()
    };
    assert!(minimal_exclusion_zone(&e, limits).is_err());
}

#[test]
fn single_set_gadget_is_not_a_zone() {
    let inst = Rx3cInstance::new(&[["1", "2", "3"]; 3]).unwrap();
    let g = rx3c_gadget(&inst).unwrap();
    let e = Electorate::new(g.graph.clone()).unwrap();
    let r = is_exclusion_zone(&e, &g.winning_pair(), DEFAULT_CHECKER_CAP).unwrap();
    assert_eq!(r.verdict, Verdict::NotZone);
    assert!(r.counterexample.unwrap().replays(&e));
    let pruned = is_exclusion_zone_pruned(&e, &g.winning_pair(), DEFAULT_PRUNED_BUDGET).unwrap();
    assert!(pruned.counterexample.unwrap().replays(&e));
    assert!(is_exclusion_zone(&e, &e.all_nodes(), 0).unwrap().is_zone());
}

#[test]
fn gadget_with_a_cover_is_not_a_zone() {
    // Nine items, each in three sets; {123, 456, 789} is an exact cover.
    let sets = [
        ["1", "2", "3"], ["4", "5", "6"], ["7", "8", "9"],
        ["1", "4", "7"], ["2", "5", "8"], ["3", "6", "9"],
        ["1", "5", "9"], ["2", "6", "7"], ["3", "4", "8"],
    ];
    let inst = Rx3cInstance::new(&sets).unwrap();
    assert!(!inst.exact_covers().is_empty());
    let g = rx3c_gadget(&inst).unwrap();
    let e = Electorate::new(g.graph.clone()).unwrap();
    let r = is_exclusion_zone_pruned(&e, &g.winning_pair(), DEFAULT_PRUNED_BUDGET).unwrap();
    assert_eq!(r.verdict, Verdict::NotZone);
    assert!(r.counterexample.unwrap().replays(&e));
}
