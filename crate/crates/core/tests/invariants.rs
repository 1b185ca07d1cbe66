//! Property tests over random connected networks.

use std::collections::BTreeSet;

use netcentral_core::analytics::{average_ranks, five_number, quantile};
use netcentral_core::engine::{all_measures_with, oracle_measures};
use netcentral_core::{
    all_measures, build_network, load_network, rank, serialize_network, spearman, top_fraction,
    LineId, Link, Measure, NetworkDocument, Parallelism, Station, TransitNetwork,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random spanning tree plus `extra` random chords, all on line 1.
fn random_network(seed: u64, n: usize, extra: usize) -> TransitNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let line = LineId::new(1, "red");
    let ids: Vec<String> = (0..n).map(|i| format!("s{i:03}")).collect();
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.insert((j, i));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let stations = ids
        .iter()
        .map(|id| Station::new(id.clone(), id.clone(), [line.clone()]))
        .collect();
    let links = edges
        .into_iter()
        .map(|(a, b)| Link::new(ids[a].clone(), ids[b].clone(), [line.clone()]))
        .collect();
    build_network(stations, links).expect("spanning tree keeps it connected")
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

fn graph_strategy() -> impl Strategy<Value = TransitNetwork> {
    (any::<u64>(), 2usize..40, 0usize..60)
        .prop_map(|(seed, n, extra)| random_network(seed, n, extra))
}

/// All-pairs hop distances from one BFS per source.
fn distances(net: &TransitNetwork) -> Vec<Vec<u32>> {
    net.stations()
        .iter()
        .map(|s| netcentral_core::bfs_row(net, &s.id).expect("known").dist)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_engine_matches_path_enumeration(net in graph_strategy()) {
        let fast = all_measures::<f64>(&net).unwrap();
        let slow = oracle_measures::<f64>(&net).unwrap();
        prop_assert_eq!(&fast.degree, &slow.degree);
        prop_assert_eq!(&fast.eccentricity, &slow.eccentricity);
        prop_assert_eq!(&fast.links, &slow.links);
        for i in 0..net.station_count() {
            prop_assert!(close(fast.closeness[i], slow.closeness[i], 1e-9));
            prop_assert!(close(fast.betweenness[i], slow.betweenness[i], 1e-9));
        }
        for k in 0..net.link_count() {
            prop_assert!(close(fast.edge_betweenness[k], slow.edge_betweenness[k], 1e-9));
        }
    }

    #[test]
    fn conservation_laws(net in graph_strategy()) {
        let t = all_measures::<f64>(&net).unwrap();
        let d = distances(&net);
        let n = net.station_count();
        let (mut pair_sum, mut inner_sum) = (0u64, 0u64);
        for a in 0..n {
            for b in a + 1..n {
                pair_sum += u64::from(d[a][b]);
                inner_sum += u64::from(d[a][b] - 1);
            }
        }
        // Each unordered pair spreads one unit over every link of its paths
        // and over every interior station.
        let edge_total: f64 = t.edge_betweenness.iter().sum();
        let node_total: f64 = t.betweenness.iter().sum();
        prop_assert!(close(edge_total, pair_sum as f64, 1e-9));
        prop_assert!(close(node_total, inner_sum as f64, 1e-9));
        prop_assert_eq!(t.degree.iter().sum::<usize>(), 2 * net.link_count());
        for i in 0..n {
            let total: u32 = d[i].iter().sum();
            prop_assert!(close(t.closeness[i], (n - 1) as f64 / f64::from(total), 1e-12));
            prop_assert_eq!(t.eccentricity[i], *d[i].iter().max().unwrap());
            prop_assert!(t.betweenness[i] >= 0.0);
        }
        prop_assert!(t.radius() <= t.diameter() && t.diameter() <= 2 * t.radius());
    }

    #[test]
    fn edge_betweenness_bounded_below_by_one(net in graph_strategy()) {
        // The endpoints of a link are always joined by that link alone.
        let t = all_measures::<f64>(&net).unwrap();
        for &v in &t.edge_betweenness {
            prop_assert!(v >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn relabeling_permutes_results(net in graph_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = net.station_count();
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(&mut rng);
        let rename = |id: &str| {
            let i = net.index_of(id).unwrap();
            format!("p{:03}", labels[i])
        };
        let (stations, links) = net.to_parts();
        let stations: Vec<Station> = stations
            .into_iter()
            .map(|s| Station::new(rename(&s.id), s.name, s.lines))
            .collect();
        let links: Vec<Link> = links.into_iter().map(|l| Link::new(rename(&l.a), rename(&l.b), l.lines)).collect();
        let renamed = build_network(stations, links).unwrap();

        let t = all_measures::<f64>(&net).unwrap();
        let r = all_measures::<f64>(&renamed).unwrap();
        for (i, s) in net.stations().iter().enumerate() {
            let j = r.index_of(&rename(&s.id)).unwrap();
            prop_assert_eq!(t.degree[i], r.degree[j]);
            prop_assert_eq!(t.eccentricity[i], r.eccentricity[j]);
            prop_assert!(close(t.closeness[i], r.closeness[j], 1e-12));
            prop_assert!(close(t.betweenness[i], r.betweenness[j], 1e-9));
        }
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise(net in graph_strategy()) {
        let s = all_measures_with::<f64>(&net, Parallelism::Sequential).unwrap();
        let p = all_measures_with::<f64>(&net, Parallelism::Rayon).unwrap();
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&s.betweenness), bits(&p.betweenness));
        prop_assert_eq!(bits(&s.edge_betweenness), bits(&p.edge_betweenness));
        prop_assert_eq!(bits(&s.closeness), bits(&p.closeness));
    }

    #[test]
    fn single_precision_tracks_double(net in graph_strategy()) {
        let d = all_measures::<f64>(&net).unwrap();
        let s = all_measures::<f32>(&net).unwrap();
        for i in 0..net.station_count() {
            prop_assert!(close(d.closeness[i], f64::from(s.closeness[i]), 1e-5));
            prop_assert!(close(d.betweenness[i], f64::from(s.betweenness[i]), 1e-4));
        }
    }

    #[test]
    fn document_round_trip(net in graph_strategy()) {
        let doc = NetworkDocument::from_network("random", &net);
        let text = serialize_network(&doc);
        let (back_doc, back) = load_network(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(serialize_network(&back_doc), text);
    }

    #[test]
    fn ranks_are_competition_ranks(net in graph_strategy()) {
        let t = all_measures::<f64>(&net).unwrap();
        for m in Measure::ALL {
            let list = rank(&t, m);
            prop_assert_eq!(list.len(), net.station_count());
            for e in &list.entries {
                let better = list.entries.iter().filter(|o| match m.direction() {
                    netcentral_core::Direction::Descending => o.value > e.value,
                    netcentral_core::Direction::Ascending => o.value < e.value,
                }).count();
                prop_assert_eq!(e.rank, better + 1);
            }
            for w in list.entries.windows(2) {
                prop_assert!(w[0].rank <= w[1].rank);
                if w[0].value == w[1].value {
                    prop_assert!(w[0].station_id < w[1].station_id);
                }
            }
        }
    }

    #[test]
    fn top_fraction_size(net in graph_strategy(), f in 0.001f64..=1.0) {
        let t = all_measures::<f64>(&net).unwrap();
        let list = rank(&t, Measure::Closeness);
        let top = top_fraction(&list, f).unwrap();
        let n = list.len() as f64;
        prop_assert!(top.len() >= 1);
        prop_assert!(top.len() as f64 >= f * n - 1e-9);
        prop_assert!((top.len() as f64) < f * n + 1.0);
        prop_assert_eq!(&top.entries[..], &list.entries[..top.len()]);
    }

    #[test]
    fn spearman_bounds_and_symmetry(xs in prop::collection::vec(-50i32..50, 3..40), seed in any::<u64>()) {
        let x: Vec<f64> = xs.iter().map(|&v| f64::from(v)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<f64> = x.iter().map(|_| f64::from(rng.gen_range(-50i32..50))).collect();
        if let Some(r) = spearman(&x, &y) {
            prop_assert!((-1.0..=1.0).contains(&r));
            prop_assert!(close(r, spearman(&y, &x).unwrap(), 1e-12));
            let neg: Vec<f64> = y.iter().map(|v| -v).collect();
            prop_assert!(close(-r, spearman(&x, &neg).unwrap(), 1e-12));
        }
        if let Some(r) = spearman(&x, &x) {
            prop_assert!(close(r, 1.0, 1e-12));
        }
        let ranks = average_ranks(&x);
        let n = x.len() as f64;
        prop_assert!(close(ranks.iter().sum::<f64>(), n * (n + 1.0) / 2.0, 1e-12));
    }

    #[test]
    fn five_numbers_are_ordered(xs in prop::collection::vec(-1e6f64..1e6, 1..60)) {
        let f = five_number(&xs).unwrap();
        prop_assert!(f.min <= f.q1 && f.q1 <= f.median && f.median <= f.q3 && f.q3 <= f.max);
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assert_eq!(f.min, sorted[0]);
        prop_assert_eq!(f.max, *sorted.last().unwrap());
        prop_assert_eq!(quantile(&sorted, 0.5), f.median);
    }
}
