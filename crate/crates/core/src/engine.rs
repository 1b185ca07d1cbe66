//! Shortest-path centrality: degree, closeness, eccentricity, node and edge
//! betweenness, plus a brute-force oracle for small graphs.
//!
//! Every per-station vector is indexed like [`TransitNetwork::stations`] and
//! every per-link vector like [`TransitNetwork::links`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{TransitNetwork, UnknownStation};
use crate::scalar::Scalar;

/// Largest network [`oracle_measures`] accepts.
pub const ORACLE_MAX_STATIONS: usize = 64;

/// Sources handled by one accumulation task. Fixed so that the reduction
/// order, and therefore every floating-point sum, is independent of the
/// thread count.
const SOURCE_CHUNK: usize = 32;

const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    UnknownStation(#[from] UnknownStation),
    #[error("shortest-path count overflowed 128 bits in the search from `{source_id}`")]
    PathCountOverflow { source_id: String },
    #[error("oracle is limited to {limit} stations, network has {stations}")]
    OracleTooLarge { stations: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Degree,
    Closeness,
    Betweenness,
    Eccentricity,
}

/// Which end of a measure's scale is "more central".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Descending,
    Ascending,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Degree,
        Measure::Closeness,
        Measure::Betweenness,
        Measure::Eccentricity,
    ];

    pub fn direction(self) -> Direction {
        match self {
            Measure::Eccentricity => Direction::Ascending,
            _ => Direction::Descending,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Closeness => "closeness",
            Measure::Betweenness => "betweenness",
            Measure::Eccentricity => "eccentricity",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown measure `{0}` (expected degree, closeness, betweenness or eccentricity)")]
pub struct UnknownMeasure(pub String);

impl FromStr for Measure {
    type Err = UnknownMeasure;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownMeasure(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    #[default]
    Rayon,
}

/// Hop distances and shortest-path counts from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRow {
    pub source: usize,
    pub dist: Vec<u32>,
    pub path_counts: Vec<u128>,
}

/// Per-station and per-link centrality values for one network.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityTable<F> {
    pub station_ids: Vec<String>,
    pub degree: Vec<usize>,
    pub closeness: Vec<F>,
    pub betweenness: Vec<F>,
    pub eccentricity: Vec<u32>,
    /// Link endpoints as `(a, b)` station ids with `a < b`.
    pub links: Vec<(String, String)>,
    pub edge_betweenness: Vec<F>,
}

impl<F: Scalar> CentralityTable<F> {
    pub fn len(&self) -> usize {
        self.station_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.station_ids.is_empty()
    }

    pub fn value(&self, measure: Measure, index: usize) -> F {
        match measure {
            Measure::Degree => <F as Scalar>::from_usize(self.degree[index]),
            Measure::Closeness => self.closeness[index],
            Measure::Betweenness => self.betweenness[index],
            Measure::Eccentricity => F::from(self.eccentricity[index]).unwrap_or_else(F::infinity),
        }
    }

    pub fn values(&self, measure: Measure) -> Vec<F> {
        (0..self.len()).map(|i| self.value(measure, i)).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.station_ids.iter().position(|s| s == id)
    }

    pub fn get(&self, measure: Measure, id: &str) -> Option<F> {
        self.index_of(id).map(|i| self.value(measure, i))
    }

    pub fn radius(&self) -> u32 {
        self.eccentricity.iter().copied().min().unwrap_or(0)
    }

    pub fn diameter(&self) -> u32 {
        self.eccentricity.iter().copied().max().unwrap_or(0)
    }
}

pub fn bfs_row(network: &TransitNetwork, source: &str) -> Result<DistanceRow, EngineError> {
    let s = network.index_of(source)?;
    let mut ws = Workspace::<f64>::new(network.station_count());
    ws.search(network, s)?;
    Ok(DistanceRow {
        source: s,
        dist: ws.dist,
        path_counts: ws.sigma,
    })
}

pub fn degree(network: &TransitNetwork) -> Vec<usize> {
    (0..network.station_count())
        .map(|i| network.neighbors(i).len())
        .collect()
}

/// `(n - 1) / sum of hop distances` for every station.
pub fn closeness<F: Scalar>(network: &TransitNetwork) -> Vec<F> {
    distance_profile(network)
        .into_iter()
        .map(|(total, _)| closeness_from(network.station_count(), total))
        .collect()
}

/// Largest hop distance from every station.
pub fn eccentricity(network: &TransitNetwork) -> Vec<u32> {
    distance_profile(network)
        .into_iter()
        .map(|(_, ecc)| ecc)
        .collect()
}

/// Unnormalized node betweenness, each unordered pair counted once.
pub fn betweenness<F: Scalar>(network: &TransitNetwork) -> Result<Vec<F>, EngineError> {
    accumulate::<F>(network, Parallelism::default()).map(|acc| acc.node)
}

/// Edge betweenness, each unordered pair counted once; endpoint pairs count.
pub fn edge_betweenness<F: Scalar>(network: &TransitNetwork) -> Result<Vec<F>, EngineError> {
    accumulate::<F>(network, Parallelism::default()).map(|acc| acc.edge)
}

pub fn all_measures<F: Scalar>(
    network: &TransitNetwork,
) -> Result<CentralityTable<F>, EngineError> {
    all_measures_with(network, Parallelism::default())
}

/// One breadth-first search per source feeds every measure. Output is
/// bit-identical for both parallelism modes.
pub fn all_measures_with<F: Scalar>(
    network: &TransitNetwork,
    parallelism: Parallelism,
) -> Result<CentralityTable<F>, EngineError> {
    let acc = accumulate::<F>(network, parallelism)?;
    let n = network.station_count();
    Ok(CentralityTable {
        station_ids: network.stations().iter().map(|s| s.id.clone()).collect(),
        degree: degree(network),
        closeness: acc.total.iter().map(|&t| closeness_from(n, t)).collect(),
        betweenness: acc.node,
        eccentricity: acc.ecc,
        links: network
            .links()
            .iter()
            .map(|l| (l.a.clone(), l.b.clone()))
            .collect(),
        edge_betweenness: acc.edge,
    })
}

fn closeness_from<F: Scalar>(n: usize, total: u64) -> F {
    let n1 = <F as Scalar>::from_usize(n - 1);
    n1 / F::from(total).unwrap_or_else(F::infinity)
}

fn distance_profile(network: &TransitNetwork) -> Vec<(u64, u32)> {
    let n = network.station_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![UNREACHED; n], Vec::with_capacity(n)),
            |(dist, queue), s| {
                dist.fill(UNREACHED);
                queue.clear();
                dist[s] = 0;
                queue.push(s);
                let mut head = 0;
                let (mut total, mut ecc) = (0u64, 0u32);
                while head < queue.len() {
                    let v = queue[head];
                    head += 1;
                    total += u64::from(dist[v]);
                    ecc = ecc.max(dist[v]);
                    for &w in network.neighbors(v) {
                        if dist[w] == UNREACHED {
                            dist[w] = dist[v] + 1;
                            queue.push(w);
                        }
                    }
                }
                (total, ecc)
            },
        )
        .collect()
}

struct Accumulated<F> {
    node: Vec<F>,
    edge: Vec<F>,
    total: Vec<u64>,
    ecc: Vec<u32>,
}

struct Partial<F> {
    node: Vec<F>,
    edge: Vec<F>,
    profile: Vec<(u64, u32)>,
}

fn accumulate<F: Scalar>(
    network: &TransitNetwork,
    parallelism: Parallelism,
) -> Result<Accumulated<F>, EngineError> {
    let n = network.station_count();
    let m = network.link_count();
    let chunks: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(SOURCE_CHUNK)
        .map(|start| start..(start + SOURCE_CHUNK).min(n))
        .collect();
    let run = |range: &std::ops::Range<usize>| -> Result<Partial<F>, EngineError> {
        let mut ws = Workspace::<F>::new(n);
        let mut part = Partial {
            node: vec![F::zero(); n],
            edge: vec![F::zero(); m],
            profile: Vec::with_capacity(range.len()),
        };
        for s in range.clone() {
            ws.search(network, s)?;
            part.profile
                .push(ws.dependencies(network, &mut part.node, &mut part.edge));
        }
        Ok(part)
    };
    let partials: Vec<Partial<F>> = match parallelism {
        Parallelism::Sequential => chunks.iter().map(run).collect::<Result<_, _>>()?,
        Parallelism::Rayon => chunks.par_iter().map(run).collect::<Result<_, _>>()?,
    };

    let two = F::one() + F::one();
    let mut acc = Accumulated {
        node: vec![F::zero(); n],
        edge: vec![F::zero(); m],
        total: Vec::with_capacity(n),
        ecc: Vec::with_capacity(n),
    };
    for part in partials {
        for (a, b) in acc.node.iter_mut().zip(&part.node) {
            *a = *a + *b;
        }
        for (a, b) in acc.edge.iter_mut().zip(&part.edge) {
            *a = *a + *b;
        }
        for (total, ecc) in part.profile {
            acc.total.push(total);
            acc.ecc.push(ecc);
        }
    }
    // Each unordered pair was reached once from either end.
    for v in acc.node.iter_mut().chain(acc.edge.iter_mut()) {
        *v = *v / two;
    }
    Ok(acc)
}

/// Reusable buffers for single-source searches.
struct Workspace<F> {
    dist: Vec<u32>,
    sigma: Vec<u128>,
    delta: Vec<F>,
    order: Vec<usize>,
}

impl<F: Scalar> Workspace<F> {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![UNREACHED; n],
            sigma: vec![0; n],
            delta: vec![F::zero(); n],
            order: Vec::with_capacity(n),
        }
    }

    /// Fills `dist`, `sigma` and `order` (non-decreasing distance) from `s`.
    fn search(&mut self, network: &TransitNetwork, s: usize) -> Result<(), EngineError> {
        self.dist.fill(UNREACHED);
        self.sigma.fill(0);
        self.order.clear();
        self.dist[s] = 0;
        self.sigma[s] = 1;
        self.order.push(s);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let next = self.dist[v] + 1;
            for &w in network.neighbors(v) {
                if self.dist[w] == UNREACHED {
                    self.dist[w] = next;
                    self.order.push(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] = self.sigma[w].checked_add(self.sigma[v]).ok_or_else(|| {
                        EngineError::PathCountOverflow {
                            source_id: network.station(s).id.clone(),
                        }
                    })?;
                }
            }
        }
        Ok(())
    }

    /// Back-propagates pair dependencies of the last search into `node` and
    /// `edge`, and returns the source's distance total and eccentricity.
    fn dependencies(
        &mut self,
        network: &TransitNetwork,
        node: &mut [F],
        edge: &mut [F],
    ) -> (u64, u32) {
        let s = self.order[0];
        let mut total = 0u64;
        for &w in self.order.iter().rev() {
            total += u64::from(self.dist[w]);
            let coefficient = (F::one() + self.delta[w]) / F::from_count(self.sigma[w]);
            for &(v, k) in network.incident_links(w) {
                if self.dist[v] != UNREACHED && self.dist[v] + 1 == self.dist[w] {
                    let c = F::from_count(self.sigma[v]) * coefficient;
                    edge[k] = edge[k] + c;
                    self.delta[v] = self.delta[v] + c;
                }
            }
            if w != s {
                node[w] = node[w] + self.delta[w];
            }
        }
        let ecc = self.dist[*self.order.last().unwrap_or(&s)];
        for &w in &self.order {
            self.delta[w] = F::zero();
        }
        (total, ecc)
    }
}

/// Reference implementation: all-pairs distances by Floyd-Warshall and
/// betweenness by listing every shortest path of every pair.
pub fn oracle_measures<F: Scalar>(
    network: &TransitNetwork,
) -> Result<CentralityTable<F>, EngineError> {
    let n = network.station_count();
    if n > ORACLE_MAX_STATIONS {
        return Err(EngineError::OracleTooLarge {
            stations: n,
            limit: ORACLE_MAX_STATIONS,
        });
    }
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    let mut link_of: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for k in 0..network.link_count() {
        let (a, b) = network.link_endpoints(k);
        d[a][b] = 1;
        d[b][a] = 1;
        link_of.insert((a, b), k);
        link_of.insert((b, a), k);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }

    let mut node_hits = vec![0f64; n];
    let mut edge_hits = vec![0f64; network.link_count()];
    for s in 0..n {
        for t in (s + 1)..n {
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut current = vec![s];
            enumerate_paths(&d, s, t, &mut current, &mut paths);
            let share = 1.0 / paths.len() as f64;
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    node_hits[v] += share;
                }
                for pair in path.windows(2) {
                    edge_hits[link_of[&(pair[0], pair[1])]] += share;
                }
            }
        }
    }

    let n1 = (n - 1) as f64;
    let to_f = |x: f64| F::from(x).unwrap_or_else(F::nan);
    Ok(CentralityTable {
        station_ids: network.stations().iter().map(|s| s.id.clone()).collect(),
        degree: d
            .iter()
            .map(|row| row.iter().filter(|&&x| x == 1).count())
            .collect(),
        closeness: d
            .iter()
            .map(|row| to_f(n1 / row.iter().map(|&x| f64::from(x)).sum::<f64>()))
            .collect(),
        betweenness: node_hits.into_iter().map(to_f).collect(),
        eccentricity: d
            .iter()
            .map(|row| row.iter().copied().max().unwrap_or(0))
            .collect(),
        links: network
            .links()
            .iter()
            .map(|l| (l.a.clone(), l.b.clone()))
            .collect(),
        edge_betweenness: edge_hits.into_iter().map(to_f).collect(),
    })
}

fn enumerate_paths(
    d: &[Vec<u32>],
    s: usize,
    t: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let v = *current.last().expect("path starts at the source");
    if v == t {
        out.push(current.clone());
        return;
    }
    for w in 0..d.len() {
        if d[v][w] == 1 && d[s][w] == d[s][v] + 1 && d[w][t] + 1 == d[v][t] {
            current.push(w);
            enumerate_paths(d, s, t, current, out);
            current.pop();
        }
    }
}
