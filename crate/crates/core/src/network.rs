//! Stations, lines and links, and the validated undirected graph built from them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A transit line: its public number and the display color used on maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineId {
    pub number: u8,
    pub color: String,
}

impl LineId {
    pub fn new(number: u8, color: impl Into<String>) -> Self {
        Self {
            number,
            color: color.into(),
        }
    }
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Station {
    pub id: String,
    pub name: String,
    pub lines: BTreeSet<LineId>,
}

impl Station {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        lines: impl IntoIterator<Item = LineId>,
    ) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            lines: lines.into_iter().collect(),
        }
    }

    pub fn serves(&self, number: u8) -> bool {
        self.lines.iter().any(|l| l.number == number)
    }
}

/// An adjacency between two stations. Inside a [`TransitNetwork`] the endpoints
/// are stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub a: String,
    pub b: String,
    pub lines: BTreeSet<LineId>,
}

impl Link {
    pub fn new(
        a: impl Into<String>,
        b: impl Into<String>,
        lines: impl IntoIterator<Item = LineId>,
    ) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            lines: lines.into_iter().collect(),
        }
    }
}

/// Degree-based station taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationClass {
    Terminal,
    Regular,
    YBranch,
    CrossSection,
}

impl StationClass {
    pub const ALL: [StationClass; 4] = [
        StationClass::Terminal,
        StationClass::Regular,
        StationClass::YBranch,
        StationClass::CrossSection,
    ];

    /// Degree 1 is a terminal, 2 regular, 3 a Y-branch, 4 and above a cross-section.
    /// A connected network of two or more stations has no degree-0 stations.
    pub fn from_degree(degree: usize) -> Self {
        match degree {
            0 | 1 => StationClass::Terminal,
            2 => StationClass::Regular,
            3 => StationClass::YBranch,
            _ => StationClass::CrossSection,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StationClass::Terminal => "terminal",
            StationClass::Regular => "regular",
            StationClass::YBranch => "y_branch",
            StationClass::CrossSection => "cross_section",
        }
    }
}

impl fmt::Display for StationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCensus {
    pub terminal: usize,
    pub regular: usize,
    pub y_branch: usize,
    pub cross_section: usize,
}

impl ClassCensus {
    pub fn get(&self, class: StationClass) -> usize {
        match class {
            StationClass::Terminal => self.terminal,
            StationClass::Regular => self.regular,
            StationClass::YBranch => self.y_branch,
            StationClass::CrossSection => self.cross_section,
        }
    }

    pub fn total(&self) -> usize {
        self.terminal + self.regular + self.y_branch + self.cross_section
    }

    fn bump(&mut self, class: StationClass) {
        match class {
            StationClass::Terminal => self.terminal += 1,
            StationClass::Regular => self.regular += 1,
            StationClass::YBranch => self.y_branch += 1,
            StationClass::CrossSection => self.cross_section += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown station `{0}`")]
pub struct UnknownStation(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("a network needs at least 2 stations, got {0}")]
    TooFewStations(usize),
    #[error("station id must not be empty")]
    EmptyStationId,
    #[error("duplicate station id `{0}`")]
    DuplicateStation(String),
    #[error("station `{0}` belongs to no line")]
    StationWithoutLines(String),
    #[error("line number 0 is not allowed (station `{0}`)")]
    InvalidLineNumber(String),
    #[error("line {number} is declared with two colors: `{first}` and `{second}`")]
    LineColorConflict {
        number: u8,
        first: String,
        second: String,
    },
    #[error("link {a}--{b} references undeclared station `{station}`")]
    UnknownEndpoint {
        a: String,
        b: String,
        station: String,
    },
    #[error("link {0}--{0} is a self-loop")]
    SelfLoop(String),
    #[error("link {a}--{b} carries no line")]
    LinkWithoutLines { a: String, b: String },
    #[error("link {a}--{b} claims line {line}, which does not serve both endpoints")]
    LineNotShared { a: String, b: String, line: u8 },
    #[error("network is disconnected: {}", format_components(.components))]
    Disconnected { components: Vec<Vec<String>> },
}

fn format_components(components: &[Vec<String>]) -> String {
    let parts: Vec<String> = components
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect();
    format!("{} components {}", components.len(), parts.join(" "))
}

/// Immutable, validated, connected simple graph of stations.
///
/// Stations are stored sorted by id and links sorted by their endpoint
/// indices, so every derived vector (degrees, centralities) has a canonical
/// order independent of input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitNetwork {
    stations: Vec<Station>,
    index: HashMap<String, usize>,
    links: Vec<Link>,
    endpoints: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    incidence: Vec<Vec<(usize, usize)>>,
    lines: Vec<LineId>,
}

/// Validates and assembles a network. Parallel declarations of the same
/// unordered pair collapse into one link whose line set is the union.
pub fn build_network(
    stations: Vec<Station>,
    links: Vec<Link>,
) -> Result<TransitNetwork, BuildError> {
    TransitNetwork::build(stations, links)
}

impl TransitNetwork {
    pub fn build(mut stations: Vec<Station>, links: Vec<Link>) -> Result<Self, BuildError> {
        if stations.len() < 2 {
            return Err(BuildError::TooFewStations(stations.len()));
        }
        stations.sort_by(|x, y| x.id.cmp(&y.id));
        let mut palette: BTreeMap<u8, String> = BTreeMap::new();
        for pair in stations.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(BuildError::DuplicateStation(pair[0].id.clone()));
            }
        }
        for s in &stations {
            if s.id.is_empty() {
                return Err(BuildError::EmptyStationId);
            }
            if s.lines.is_empty() {
                return Err(BuildError::StationWithoutLines(s.id.clone()));
            }
            for line in &s.lines {
                register_line(&mut palette, line, || s.id.clone())?;
            }
        }
        let index: HashMap<String, usize> = stations
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();

        let mut merged: BTreeMap<(usize, usize), BTreeSet<LineId>> = BTreeMap::new();
        for link in links {
            let ia = *index
                .get(&link.a)
                .ok_or_else(|| BuildError::UnknownEndpoint {
                    a: link.a.clone(),
                    b: link.b.clone(),
                    station: link.a.clone(),
                })?;
            let ib = *index
                .get(&link.b)
                .ok_or_else(|| BuildError::UnknownEndpoint {
                    a: link.a.clone(),
                    b: link.b.clone(),
                    station: link.b.clone(),
                })?;
            if ia == ib {
                return Err(BuildError::SelfLoop(link.a));
            }
            if link.lines.is_empty() {
                return Err(BuildError::LinkWithoutLines {
                    a: link.a,
                    b: link.b,
                });
            }
            for line in &link.lines {
                register_line(&mut palette, line, || link.a.clone())?;
                if !stations[ia].lines.contains(line) || !stations[ib].lines.contains(line) {
                    return Err(BuildError::LineNotShared {
                        a: link.a.clone(),
                        b: link.b.clone(),
                        line: line.number,
                    });
                }
            }
            merged
                .entry((ia.min(ib), ia.max(ib)))
                .or_default()
                .extend(link.lines);
        }

        let n = stations.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut incidence = vec![Vec::new(); n];
        let mut out_links = Vec::with_capacity(merged.len());
        let mut endpoints = Vec::with_capacity(merged.len());
        for (k, ((ia, ib), lines)) in merged.into_iter().enumerate() {
            adjacency[ia].push(ib);
            adjacency[ib].push(ia);
            incidence[ia].push((ib, k));
            incidence[ib].push((ia, k));
            endpoints.push((ia, ib));
            out_links.push(Link {
                a: stations[ia].id.clone(),
                b: stations[ib].id.clone(),
                lines,
            });
        }
        for (adj, inc) in adjacency.iter_mut().zip(incidence.iter_mut()) {
            adj.sort_unstable();
            inc.sort_unstable();
        }

        let network = Self {
            lines: palette
                .into_iter()
                .map(|(number, color)| LineId { number, color })
                .collect(),
            stations,
            index,
            links: out_links,
            endpoints,
            adjacency,
            incidence,
        };
        let components = network.components();
        if components.len() > 1 {
            return Err(BuildError::Disconnected {
                components: components
                    .into_iter()
                    .map(|c| {
                        c.into_iter()
                            .map(|i| network.stations[i].id.clone())
                            .collect()
                    })
                    .collect(),
            });
        }
        Ok(network)
    }

    /// Connected components as sorted station-index lists, ordered by their smallest member.
    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.stations.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn station_count(&self) -> usize {
        self.stations.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    /// Stations sorted by id; positions in this slice are the station indices
    /// used by every per-station vector in the crate.
    pub fn stations(&self) -> &[Station] {
        &self.stations
    }

    /// Links sorted by endpoint index pair.
    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Every line that appears on any station, sorted by number.
    pub fn lines(&self) -> &[LineId] {
        &self.lines
    }

    pub fn line(&self, number: u8) -> Option<&LineId> {
        self.lines.iter().find(|l| l.number == number)
    }

    pub fn station(&self, index: usize) -> &Station {
        &self.stations[index]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, UnknownStation> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| UnknownStation(id.to_owned()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Sorted neighbor indices of a station.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adjacency[index]
    }

    /// `(neighbor, link index)` pairs, sorted by neighbor.
    pub fn incident_links(&self, index: usize) -> &[(usize, usize)] {
        &self.incidence[index]
    }

    /// Endpoint indices `(a, b)` with `a < b` for the link at `link_index`.
    pub fn link_endpoints(&self, link_index: usize) -> (usize, usize) {
        self.endpoints[link_index]
    }

    pub fn find_link(&self, a: &str, b: &str) -> Option<usize> {
        let ia = self.index.get(a)?;
        let ib = self.index.get(b)?;
        self.incidence[*ia]
            .iter()
            .find(|(w, _)| w == ib)
            .map(|&(_, k)| k)
    }

    pub fn degree(&self, id: &str) -> Result<usize, UnknownStation> {
        Ok(self.adjacency[self.index_of(id)?].len())
    }

    pub fn classify_station(&self, id: &str) -> Result<StationClass, UnknownStation> {
        self.degree(id).map(StationClass::from_degree)
    }

    pub fn class_of(&self, index: usize) -> StationClass {
        StationClass::from_degree(self.adjacency[index].len())
    }

    pub fn class_census(&self) -> ClassCensus {
        let mut census = ClassCensus::default();
        for adj in &self.adjacency {
            census.bump(StationClass::from_degree(adj.len()));
        }
        census
    }

    /// Indices of the stations served by line `number`.
    pub fn stations_on_line(&self, number: u8) -> impl Iterator<Item = usize> + '_ {
        self.stations
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.serves(number))
            .map(|(i, _)| i)
    }

    /// Owned copies of the station and link lists; feeding them back into
    /// [`build_network`] reproduces `self`.
    pub fn to_parts(&self) -> (Vec<Station>, Vec<Link>) {
        (self.stations.clone(), self.links.clone())
    }
}

fn register_line(
    palette: &mut BTreeMap<u8, String>,
    line: &LineId,
    owner: impl FnOnce() -> String,
) -> Result<(), BuildError> {
    if line.number == 0 {
        return Err(BuildError::InvalidLineNumber(owner()));
    }
    match palette.get(&line.number) {
        Some(color) if *color != line.color => Err(BuildError::LineColorConflict {
            number: line.number,
            first: color.clone(),
            second: line.color.clone(),
        }),
        Some(_) => Ok(()),
        None => {
            palette.insert(line.number, line.color.clone());
            Ok(())
        }
    }
}
