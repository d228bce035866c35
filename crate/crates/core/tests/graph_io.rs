use irvzone::graph::{
    all_pairs_distances, parse_edge_list, parse_graph6, to_graph6, EdgeListOptions, GraphError,
};
use irvzone::Graph;

#[test]
fn graph6_examples() {
    let k4 = parse_graph6("C~").unwrap();
    assert_eq!((k4.n(), k4.m()), (4, 6));
    let one = parse_graph6("@").unwrap();
    assert_eq!((one.n(), one.m()), (1, 0));
    let p4 = parse_graph6("Ch\n").unwrap();
    let mut degrees: Vec<usize> = (0..4).map(|v| p4.degree(v)).collect();
    degrees.sort_unstable();
    assert_eq!((p4.m(), degrees), (3, vec![1, 1, 2, 2]));
    assert!(parse_graph6(">>graph6<<C~").is_ok());
    assert!(parse_graph6("").is_err());
    assert!(matches!(parse_graph6("C?"), Err(GraphError::Disconnected { .. })));
}

#[test]
fn edge_list_examples() {
    let opts = EdgeListOptions::default();
    let p3 = parse_edge_list("a b\nb c", opts).unwrap();
    assert_eq!((p3.n(), p3.m()), (3, 2));
    assert_eq!(p3.labels().unwrap(), ["a", "b", "c"]);
    let single = parse_edge_list("a b\nb a\na b", opts).unwrap();
    assert_eq!((single.n(), single.m()), (2, 1));
    assert!(matches!(
        parse_edge_list("a b\nc d", opts),
        Err(GraphError::Disconnected { .. })
    ));
    let largest = EdgeListOptions {
        largest_component: true,
        ..opts
    };
    let kept = parse_edge_list("a b\nc d\nd e", largest).unwrap();
    assert_eq!(kept.labels().unwrap(), ["c", "d", "e"]);
    assert!(parse_edge_list("a a", opts).is_err());
    assert!(matches!(
        parse_edge_list("a b c", opts),
        Err(GraphError::Unparsable { line: 1, .. })
    ));
}

#[test]
fn edge_lists_with_comments_and_nominations() {
    let text = "# school friendships\n1,2\n2 3 # mutual\n3 2\n10 3\n";
    let g = parse_edge_list(text, EdgeListOptions::default()).unwrap();
    assert_eq!(g.labels().unwrap(), ["1", "2", "3", "10"]);
    assert_eq!(g.m(), 3);
    let mutual = EdgeListOptions {
        symmetrize: false,
        largest_component: true,
    };
    let g = parse_edge_list(text, mutual).unwrap();
    assert_eq!(g.labels().unwrap(), ["2", "3"]);
}

#[test]
fn distance_examples() {
    let k4 = parse_graph6("C~").unwrap();
    let d = all_pairs_distances(&k4).unwrap();
    assert!((0..4).all(|u| (0..4).all(|v| d.get(u, v) == u32::from(u != v))));
    let p6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
    assert_eq!(all_pairs_distances(&p6).unwrap().get(0, 5), 5);
    let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let d = all_pairs_distances(&c4).unwrap();
    assert_eq!((d.get(0, 2), d.get(1, 3), d.diameter()), (2, 2, 2));
}

#[test]
fn graph6_output_reparses() {
    let g = Graph::new(5, &[(0, 4), (1, 4), (2, 3), (3, 4)]).unwrap();
    let back = parse_graph6(&to_graph6(&g)).unwrap();
    assert_eq!(back.edges(), g.edges());
}
