//! Rankings, per-line summaries, rank correlation and topology-edit scenarios.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::engine::{all_measures, CentralityTable, Direction, EngineError, Measure};
use crate::network::{build_network, BuildError, LineId, Link, Station, TransitNetwork};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("fraction must lie in (0, 1], got {0}")]
    FractionOutOfRange(String),
    #[error("unknown line {0}")]
    UnknownLine(u8),
    #[error("rank correlation needs at least 3 stations, got {0}")]
    TooFewStations(usize),
    #[error("measure `{0}` is constant, so its rank correlation is undefined")]
    ConstantMeasure(Measure),
    #[error("cannot summarize an empty set of values")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry<F> {
    pub rank: usize,
    pub station_id: String,
    pub value: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedList<F> {
    pub measure: Measure,
    pub direction: Direction,
    pub entries: Vec<RankEntry<F>>,
}

impl<F> RankedList<F> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, station_id: &str) -> Option<&RankEntry<F>> {
        self.entries.iter().find(|e| e.station_id == station_id)
    }
}

fn compare_in<F: Scalar>(direction: Direction, x: F, y: F) -> Ordering {
    let natural = x.partial_cmp(&y).unwrap_or(Ordering::Equal);
    match direction {
        Direction::Descending => natural.reverse(),
        Direction::Ascending => natural,
    }
}

/// Orders stations by `measure` in its central-first direction. Equal values
/// share the smaller (competition) rank and are listed by station id.
pub fn rank<F: Scalar>(table: &CentralityTable<F>, measure: Measure) -> RankedList<F> {
    let direction = measure.direction();
    let mut order: Vec<(usize, F)> = (0..table.len())
        .map(|i| (i, table.value(measure, i)))
        .collect();
    order.sort_by(|&(i, x), &(j, y)| {
        compare_in(direction, x, y).then_with(|| table.station_ids[i].cmp(&table.station_ids[j]))
    });
    let mut entries: Vec<RankEntry<F>> = Vec::with_capacity(order.len());
    for (pos, (i, value)) in order.into_iter().enumerate() {
        let rank = match entries.last() {
            Some(prev) if prev.value == value => prev.rank,
            _ => pos + 1,
        };
        entries.push(RankEntry {
            rank,
            station_id: table.station_ids[i].clone(),
            value,
        });
    }
    RankedList {
        measure,
        direction,
        entries,
    }
}

/// The first `ceil(fraction * n)` entries, ranks preserved.
pub fn top_fraction<F: Scalar>(
    ranked: &RankedList<F>,
    fraction: f64,
) -> Result<RankedList<F>, AnalyticsError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(AnalyticsError::FractionOutOfRange(fraction.to_string()));
    }
    // 0.1 * 150 is 15.000000000000002 in binary; shave representation error before ceil.
    let scaled = fraction * ranked.len() as f64;
    let count = (scaled - scaled.abs() * 1e-12).ceil().max(1.0) as usize;
    Ok(top_count(ranked, count))
}

pub fn top_count<F: Scalar>(ranked: &RankedList<F>, count: usize) -> RankedList<F> {
    RankedList {
        measure: ranked.measure,
        direction: ranked.direction,
        entries: ranked.entries.iter().take(count).cloned().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveNumber<F> {
    pub min: F,
    pub q1: F,
    pub median: F,
    pub q3: F,
    pub max: F,
}

/// Quantile by linear interpolation between order statistics at position
/// `p * (n - 1)`. `sorted` must be ascending and non-empty.
pub fn quantile<F: Scalar>(sorted: &[F], p: F) -> F {
    let last = sorted.len() - 1;
    let pos = p * <F as Scalar>::from_usize(last);
    let lo = pos.floor().to_usize().unwrap_or(0).min(last);
    let hi = (lo + 1).min(last);
    let frac = pos - <F as Scalar>::from_usize(lo);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn five_number<F: Scalar>(values: &[F]) -> Result<FiveNumber<F>, AnalyticsError> {
    if values.is_empty() {
        return Err(AnalyticsError::Empty);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    let f = |x: f64| F::from(x).expect("quartile probabilities are representable");
    Ok(FiveNumber {
        min: sorted[0],
        q1: quantile(&sorted, f(0.25)),
        median: quantile(&sorted, f(0.5)),
        q3: quantile(&sorted, f(0.75)),
        max: sorted[sorted.len() - 1],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSummary<F> {
    pub line: LineId,
    pub measure: Measure,
    pub station_count: usize,
    pub summary: FiveNumber<F>,
}

/// Five-number summary of `measure` over every station served by `line`;
/// transfer stations count toward each of their lines.
pub fn line_summary<F: Scalar>(
    network: &TransitNetwork,
    table: &CentralityTable<F>,
    line: u8,
    measure: Measure,
) -> Result<LineSummary<F>, AnalyticsError> {
    let id = network
        .line(line)
        .ok_or(AnalyticsError::UnknownLine(line))?;
    let values: Vec<F> = network
        .stations_on_line(line)
        .map(|i| table.value(measure, i))
        .collect();
    Ok(LineSummary {
        line: id.clone(),
        measure,
        station_count: values.len(),
        summary: five_number(&values)?,
    })
}

pub fn line_summaries<F: Scalar>(
    network: &TransitNetwork,
    table: &CentralityTable<F>,
    measure: Measure,
) -> Vec<LineSummary<F>> {
    network
        .lines()
        .iter()
        .filter_map(|l| line_summary(network, table, l.number, measure).ok())
        .collect()
}

/// 1-based ranks with ties replaced by their average rank.
pub fn average_ranks<F: Scalar>(values: &[F]) -> Vec<F> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![F::zero(); values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold 1-based ranks start+1..=end.
        let avg = <F as Scalar>::from_usize(start + 1 + end) / (F::one() + F::one());
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

fn pearson<F: Scalar>(x: &[F], y: &[F]) -> Option<F> {
    let n = <F as Scalar>::from_usize(x.len());
    let mx = x.iter().copied().sum::<F>() / n;
    let my = y.iter().copied().sum::<F>() / n;
    let (mut sxy, mut sxx, mut syy) = (F::zero(), F::zero(), F::zero());
    for (&a, &b) in x.iter().zip(y) {
        sxy = sxy + (a - mx) * (b - my);
        sxx = sxx + (a - mx) * (a - mx);
        syy = syy + (b - my) * (b - my);
    }
    if sxx == F::zero() || syy == F::zero() {
        return None;
    }
    let r = sxy / (sxx * syy).sqrt();
    Some(r.max(-F::one()).min(F::one()))
}

/// Spearman coefficient: Pearson correlation of average ranks.
/// Returns `None` when either input is constant.
pub fn spearman<F: Scalar>(x: &[F], y: &[F]) -> Option<F> {
    assert_eq!(x.len(), y.len(), "paired samples must have equal length");
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Spearman correlation of two measures' raw values.
pub fn rank_correlation<F: Scalar>(
    table: &CentralityTable<F>,
    x: Measure,
    y: Measure,
) -> Result<F, AnalyticsError> {
    if table.len() < 3 {
        return Err(AnalyticsError::TooFewStations(table.len()));
    }
    let (xs, ys) = (table.values(x), table.values(y));
    let constant = |v: &[F]| v.iter().all(|&a| a == v[0]);
    if constant(&xs) {
        return Err(AnalyticsError::ConstantMeasure(x));
    }
    if constant(&ys) {
        return Err(AnalyticsError::ConstantMeasure(y));
    }
    spearman(&xs, &ys).ok_or(AnalyticsError::ConstantMeasure(x))
}

/// One topology edit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    AddLink {
        a: String,
        b: String,
        line: u8,
    },
    RemoveLink {
        a: String,
        b: String,
    },
    /// Replaces `a` and `b` by one station. Without an explicit id the new
    /// station takes the longest common dash-separated prefix of both ids,
    /// or `a` when they share none.
    MergeStations {
        a: String,
        b: String,
        new_id: Option<String>,
    },
}

impl fmt::Display for Edit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edit::AddLink { a, b, line } => write!(f, "add-link {a},{b},{line}"),
            Edit::RemoveLink { a, b } => write!(f, "remove-link {a},{b}"),
            Edit::MergeStations {
                a,
                b,
                new_id: Some(id),
            } => write!(f, "merge {a},{b},{id}"),
            Edit::MergeStations { a, b, new_id: None } => write!(f, "merge {a},{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("edit {step} ({edit}): unknown station `{station}`")]
    UnknownStation {
        step: usize,
        edit: String,
        station: String,
    },
    #[error("edit {step} ({edit}): line {line} does not exist in the network")]
    UnknownLine { step: usize, edit: String, line: u8 },
    #[error("edit {step} ({edit}): stations `{a}` and `{b}` are already linked")]
    LinkExists {
        step: usize,
        edit: String,
        a: String,
        b: String,
    },
    #[error("edit {step} ({edit}): no link between `{a}` and `{b}`")]
    NoSuchLink {
        step: usize,
        edit: String,
        a: String,
        b: String,
    },
    #[error("edit {step} ({edit}): both endpoints are `{station}`")]
    SameStation {
        step: usize,
        edit: String,
        station: String,
    },
    #[error("edit {step} ({edit}): merged id `{id}` collides with an existing station")]
    MergeCollision {
        step: usize,
        edit: String,
        id: String,
    },
    #[error("edit {step} ({edit}): {source}")]
    Rejected {
        step: usize,
        edit: String,
        #[source]
        source: BuildError,
    },
}

impl ScenarioError {
    pub fn disconnects(&self) -> bool {
        matches!(
            self,
            ScenarioError::Rejected {
                source: BuildError::Disconnected { .. },
                ..
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub edits: Vec<Edit>,
    pub base: TransitNetwork,
    pub result: TransitNetwork,
}

/// Applies `edits` in order. The network is revalidated after every edit, so
/// a sequence is accepted exactly when each prefix yields a valid network.
pub fn apply_scenario(base: &TransitNetwork, edits: &[Edit]) -> Result<Scenario, ScenarioError> {
    let mut current = base.clone();
    for (i, edit) in edits.iter().enumerate() {
        current = apply_edit(&current, edit, i + 1)?;
    }
    Ok(Scenario {
        edits: edits.to_vec(),
        base: base.clone(),
        result: current,
    })
}

fn apply_edit(
    network: &TransitNetwork,
    edit: &Edit,
    step: usize,
) -> Result<TransitNetwork, ScenarioError> {
    let label = edit.to_string();
    let known = |id: &str| {
        if network.contains(id) {
            Ok(())
        } else {
            Err(ScenarioError::UnknownStation {
                step,
                edit: label.clone(),
                station: id.to_owned(),
            })
        }
    };
    let (mut stations, mut links) = network.to_parts();
    match edit {
        Edit::AddLink { a, b, line } => {
            known(a)?;
            known(b)?;
            if a == b {
                return Err(ScenarioError::SameStation {
                    step,
                    edit: label,
                    station: a.clone(),
                });
            }
            let line_id = network
                .line(*line)
                .cloned()
                .ok_or(ScenarioError::UnknownLine {
                    step,
                    edit: label.clone(),
                    line: *line,
                })?;
            if network.find_link(a, b).is_some() {
                return Err(ScenarioError::LinkExists {
                    step,
                    edit: label,
                    a: a.clone(),
                    b: b.clone(),
                });
            }
            for s in stations.iter_mut().filter(|s| s.id == *a || s.id == *b) {
                s.lines.insert(line_id.clone());
            }
            links.push(Link::new(a.clone(), b.clone(), [line_id]));
        }
        Edit::RemoveLink { a, b } => {
            known(a)?;
            known(b)?;
            let k = network
                .find_link(a, b)
                .ok_or_else(|| ScenarioError::NoSuchLink {
                    step,
                    edit: label.clone(),
                    a: a.clone(),
                    b: b.clone(),
                })?;
            links.remove(k);
        }
        Edit::MergeStations { a, b, new_id } => {
            known(a)?;
            known(b)?;
            if a == b {
                return Err(ScenarioError::SameStation {
                    step,
                    edit: label,
                    station: a.clone(),
                });
            }
            let id = new_id.clone().unwrap_or_else(|| merged_id(a, b));
            if id != *a && id != *b && network.contains(&id) {
                return Err(ScenarioError::MergeCollision {
                    step,
                    edit: label,
                    id,
                });
            }
            let sa = &network.stations()[network.index_of(a).expect("checked")];
            let sb = &network.stations()[network.index_of(b).expect("checked")];
            let merged = Station {
                id: id.clone(),
                name: merged_name(&sa.name, &sb.name),
                lines: sa.lines.union(&sb.lines).cloned().collect(),
            };
            stations.retain(|s| s.id != *a && s.id != *b);
            stations.push(merged);
            let rename = |s: &String| {
                if s == a || s == b {
                    id.clone()
                } else {
                    s.clone()
                }
            };
            links = links
                .into_iter()
                .filter(|l| !((l.a == *a && l.b == *b) || (l.a == *b && l.b == *a)))
                .map(|l| Link {
                    a: rename(&l.a),
                    b: rename(&l.b),
                    lines: l.lines,
                })
                .collect();
        }
    }
    build_network(stations, links).map_err(|source| ScenarioError::Rejected {
        step,
        edit: label,
        source,
    })
}

fn merged_id(a: &str, b: &str) -> String {
    let common: Vec<&str> = a
        .split('-')
        .zip(b.split('-'))
        .take_while(|(x, y)| x == y)
        .map(|(x, _)| x)
        .collect();
    if common.is_empty() || common.iter().all(|t| t.is_empty()) {
        a.to_owned()
    } else {
        common.join("-")
    }
}

fn merged_name(a: &str, b: &str) -> String {
    let common: Vec<&str> = a
        .split_whitespace()
        .zip(b.split_whitespace())
        .take_while(|(x, y)| x == y)
        .map(|(x, _)| x)
        .collect();
    if common.is_empty() {
        a.to_owned()
    } else {
        common.join(" ")
    }
}

/// A station's value and rank on one side of a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement<F> {
    pub value: F,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationDelta<F> {
    pub station_id: String,
    /// `None` for stations created by the scenario.
    pub old: Option<Placement<F>>,
    /// `None` for stations removed by the scenario.
    pub new: Option<Placement<F>>,
}

impl<F: Scalar> StationDelta<F> {
    /// Positive when the station moved toward rank 1.
    pub fn rank_gain(&self) -> Option<i64> {
        Some(self.old?.rank as i64 - self.new?.rank as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineDelta<F> {
    pub line: LineId,
    pub old_mean: Option<F>,
    pub new_mean: Option<F>,
}

impl<F: Scalar> LineDelta<F> {
    pub fn change(&self) -> Option<F> {
        Some(self.new_mean? - self.old_mean?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureDiff<F> {
    pub measure: Measure,
    /// Every station of either side exactly once, sorted by id.
    pub stations: Vec<StationDelta<F>>,
    pub lines: Vec<LineDelta<F>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDiff<F> {
    pub base: CentralityTable<F>,
    pub result: CentralityTable<F>,
    pub measures: Vec<MeasureDiff<F>>,
}

impl<F: Scalar> ScenarioDiff<F> {
    pub fn measure(&self, measure: Measure) -> &MeasureDiff<F> {
        self.measures
            .iter()
            .find(|d| d.measure == measure)
            .expect("every measure is diffed")
    }

    /// True when no station value, rank or line mean moved.
    pub fn is_unchanged(&self) -> bool {
        self.measures.iter().all(|d| {
            d.stations.iter().all(|s| match (s.old, s.new) {
                (Some(o), Some(n)) => o == n,
                _ => false,
            }) && d.lines.iter().all(|l| l.old_mean == l.new_mean)
        })
    }
}

fn line_means<F: Scalar>(
    network: &TransitNetwork,
    table: &CentralityTable<F>,
    measure: Measure,
) -> BTreeMap<u8, (LineId, F)> {
    network
        .lines()
        .iter()
        .map(|line| {
            let values: Vec<F> = network
                .stations_on_line(line.number)
                .map(|i| table.value(measure, i))
                .collect();
            let mean = values.iter().copied().sum::<F>() / <F as Scalar>::from_usize(values.len());
            (line.number, (line.clone(), mean))
        })
        .collect()
}

/// Measures both sides of a scenario and pairs up every station and line.
pub fn scenario_diff<F: Scalar>(scenario: &Scenario) -> Result<ScenarioDiff<F>, EngineError> {
    let (base, result) = rayon::join(
        || all_measures::<F>(&scenario.base),
        || all_measures::<F>(&scenario.result),
    );
    let (base, result) = (base?, result?);
    let measures = Measure::ALL
        .into_iter()
        .map(|measure| {
            let placements = |table: &CentralityTable<F>| -> BTreeMap<String, Placement<F>> {
                rank(table, measure)
                    .entries
                    .into_iter()
                    .map(|e| {
                        (
                            e.station_id,
                            Placement {
                                value: e.value,
                                rank: e.rank,
                            },
                        )
                    })
                    .collect()
            };
            let (old, new) = (placements(&base), placements(&result));
            let ids: BTreeSet<&String> = old.keys().chain(new.keys()).collect();
            let stations = ids
                .into_iter()
                .map(|id| StationDelta {
                    station_id: id.clone(),
                    old: old.get(id).copied(),
                    new: new.get(id).copied(),
                })
                .collect();
            let (old_lines, new_lines) = (
                line_means(&scenario.base, &base, measure),
                line_means(&scenario.result, &result, measure),
            );
            let numbers: BTreeSet<u8> = old_lines.keys().chain(new_lines.keys()).copied().collect();
            let lines = numbers
                .into_iter()
                .map(|n| {
                    let line = old_lines
                        .get(&n)
                        .or_else(|| new_lines.get(&n))
                        .map(|(l, _)| l.clone());
                    LineDelta {
                        line: line.expect("number came from one of the maps"),
                        old_mean: old_lines.get(&n).map(|(_, m)| *m),
                        new_mean: new_lines.get(&n).map(|(_, m)| *m),
                    }
                })
                .collect();
            MeasureDiff {
                measure,
                stations,
                lines,
            }
        })
        .collect();
    Ok(ScenarioDiff {
        base,
        result,
        measures,
    })
}
