//! Scenario edits on random networks.

use netcentral_core::{
    all_measures, apply_scenario, build_network, scenario_diff, Edit, LineId, Link, ScenarioError,
    Station, TransitNetwork,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random tree on line 1 with chords, every station also on line 2. Names
/// share their first word, so the default merged name is order-independent.
fn random_network(seed: u64, n: usize, extra: usize) -> TransitNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l1, l2) = (LineId::new(1, "red"), LineId::new(2, "blue"));
    let ids: Vec<String> = (0..n).map(|i| format!("s{i:03}")).collect();
    let mut links = Vec::new();
    for i in 1..n {
        links.push(Link::new(
            ids[rng.gen_range(0..i)].clone(),
            ids[i].clone(),
            [l1.clone()],
        ));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            links.push(Link::new(ids[a].clone(), ids[b].clone(), [l1.clone()]));
        }
    }
    let stations = ids
        .iter()
        .map(|id| Station::new(id.clone(), format!("Stop {id}"), [l1.clone(), l2.clone()]))
        .collect();
    build_network(stations, links).unwrap()
}

fn missing_pair(net: &TransitNetwork, seed: u64) -> Option<(String, String)> {
    let n = net.station_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..64).find_map(|_| {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (a, b) = (&net.station(a).id, &net.station(b).id);
        (a != b && net.find_link(a, b).is_none()).then(|| (a.clone(), b.clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn add_then_remove_restores_network(seed in any::<u64>(), n in 4usize..30, extra in 0usize..10) {
        let net = random_network(seed, n, extra);
        let Some((a, b)) = missing_pair(&net, seed) else { return Ok(()) };
        let edits = [
            Edit::AddLink { a: a.clone(), b: b.clone(), line: 2 },
            Edit::RemoveLink { a, b },
        ];
        let s = apply_scenario(&net, &edits).unwrap();
        prop_assert_eq!(&s.result, &net);
        prop_assert!(scenario_diff::<f64>(&s).unwrap().is_unchanged());
    }

    #[test]
    fn scenarios_compose(seed in any::<u64>(), n in 4usize..30, extra in 0usize..10) {
        let net = random_network(seed, n, extra);
        let Some((a, b)) = missing_pair(&net, seed) else { return Ok(()) };
        let first = Edit::AddLink { a: a.clone(), b: b.clone(), line: 2 };
        let second = Edit::MergeStations { a, b, new_id: Some("merged".into()) };
        let both = apply_scenario(&net, &[first.clone(), second.clone()]).unwrap();
        let step = apply_scenario(&net, &[first]).unwrap();
        let step = apply_scenario(&step.result, &[second]).unwrap();
        prop_assert_eq!(&both.result, &step.result);
    }

    #[test]
    fn merge_is_symmetric(seed in any::<u64>(), n in 3usize..30, extra in 0usize..10) {
        let net = random_network(seed, n, extra);
        let (a, b) = (net.station(0).id.clone(), net.station(n - 1).id.clone());
        let ab = apply_scenario(&net, &[Edit::MergeStations { a: a.clone(), b: b.clone(), new_id: Some("m".into()) }]);
        let ba = apply_scenario(&net, &[Edit::MergeStations { a: b, b: a, new_id: Some("m".into()) }]);
        match (ab, ba) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(&x.result, &y.result);
                prop_assert_eq!(x.result.station_count(), n - 1);
                let t = all_measures::<f64>(&x.result).unwrap();
                prop_assert_eq!(t.degree.iter().sum::<usize>(), 2 * x.result.link_count());
            }
            (Err(x), Err(y)) => prop_assert_eq!(x, y),
            (x, y) => prop_assert!(false, "asymmetric outcome {:?} vs {:?}", x.is_ok(), y.is_ok()),
        }
    }

    #[test]
    fn removing_a_tree_bridge_is_rejected(seed in any::<u64>(), n in 3usize..30) {
        // Without chords every link is a bridge.
        let net = random_network(seed, n, 0);
        let l = &net.links()[0];
        let err = apply_scenario(&net, &[Edit::RemoveLink { a: l.a.clone(), b: l.b.clone() }]).unwrap_err();
        prop_assert!(err.disconnects());
        let first_step = matches!(err, ScenarioError::Rejected { step: 1, .. });
        prop_assert!(first_step);
    }
}
