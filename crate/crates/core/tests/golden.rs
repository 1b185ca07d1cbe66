//! Hand-computed values on small graphs.

use netcentral_core::{
    all_measures, build_network, CentralityTable, LineId, Link, Station, TransitNetwork,
};

pub fn single_line(ids: &[&str], edges: &[(&str, &str)]) -> TransitNetwork {
    let line = LineId::new(1, "red");
    build_network(
        ids.iter()
            .map(|id| Station::new(*id, *id, [line.clone()]))
            .collect(),
        edges
            .iter()
            .map(|(a, b)| Link::new(*a, *b, [line.clone()]))
            .collect(),
    )
    .unwrap()
}

fn assert_close(actual: &[f64], expected: &[f64]) {
    assert_eq!(actual.len(), expected.len());
    for (a, e) in actual.iter().zip(expected) {
        assert!((a - e).abs() <= 1e-12, "{actual:?} != {expected:?}");
    }
}

fn check(t: &CentralityTable, closeness: &[f64], betweenness: &[f64], ecc: &[u32], edge: &[f64]) {
    assert_close(&t.closeness, closeness);
    assert_close(&t.betweenness, betweenness);
    assert_eq!(t.eccentricity, ecc);
    assert_close(&t.edge_betweenness, edge);
}

#[test]
fn path_of_three() {
    let t = all_measures::<f64>(&single_line(&["a", "b", "c"], &[("a", "b"), ("b", "c")])).unwrap();
    assert_eq!(t.degree, [1, 2, 1]);
    check(
        &t,
        &[2.0 / 3.0, 1.0, 2.0 / 3.0],
        &[0.0, 1.0, 0.0],
        &[2, 1, 2],
        &[2.0, 2.0],
    );
}

#[test]
fn four_cycle() {
    let net = single_line(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
    );
    let t = all_measures::<f64>(&net).unwrap();
    check(&t, &[0.75; 4], &[0.5; 4], &[2; 4], &[2.0; 4]);
}

#[test]
fn five_cycle() {
    let net = single_line(
        &["a", "b", "c", "d", "e"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")],
    );
    let t = all_measures::<f64>(&net).unwrap();
    check(&t, &[2.0 / 3.0; 5], &[1.0; 5], &[2; 5], &[3.0; 5]);
}

#[test]
fn star_with_three_leaves() {
    let net = single_line(
        &["hub", "x", "y", "z"],
        &[("hub", "x"), ("hub", "y"), ("hub", "z")],
    );
    let t = all_measures::<f64>(&net).unwrap();
    assert_eq!(t.degree, [3, 1, 1, 1]);
    check(
        &t,
        &[1.0, 0.6, 0.6, 0.6],
        &[3.0, 0.0, 0.0, 0.0],
        &[1, 2, 2, 2],
        &[3.0; 3],
    );
}

#[test]
fn complete_graph_on_four() {
    let ids = ["a", "b", "c", "d"];
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            edges.push((ids[i], ids[j]));
        }
    }
    let t = all_measures::<f64>(&single_line(&ids, &edges)).unwrap();
    check(&t, &[1.0; 4], &[0.0; 4], &[1; 4], &[1.0; 6]);
    assert_eq!((t.radius(), t.diameter()), (1, 1));
}
