//! The `.net.json` network file: strict parsing with positioned diagnostics,
//! and canonical serialization.
//!
//! ```json
//! {
//!   "name": "Example",
//!   "lines": [{ "number": 1, "color": "red" }],
//!   "stations": [
//!     { "id": "a", "name": "A", "lines": [1] },
//!     { "id": "b", "name": "B", "lines": [1] }
//!   ],
//!   "links": [{ "from": "a", "to": "b", "line": 1 }]
//! }
//! ```
//!
//! Unknown fields and repeated keys are rejected. Each link names exactly one
//! line; a pair served by several lines is written once per line.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{build_network, BuildError, LineId, Link, Station, TransitNetwork};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDecl {
    pub number: u8,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationDecl {
    pub id: String,
    pub name: String,
    pub lines: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDecl {
    pub from: String,
    pub to: String,
    pub line: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub name: String,
    pub lines: Vec<LineDecl>,
    pub stations: Vec<StationDecl>,
    pub links: Vec<LinkDecl>,
}

/// 1-based line and column in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{message}")]
    Syntax { position: Position, message: String },
    #[error("duplicate line number {number}")]
    DuplicateLine {
        number: u8,
        position: Option<Position>,
    },
    #[error("duplicate station id `{id}`")]
    DuplicateStation {
        id: String,
        position: Option<Position>,
    },
    #[error("{referrer} references undeclared line {number}")]
    UnknownLine {
        number: u8,
        referrer: String,
        position: Option<Position>,
    },
    #[error("link references undeclared station `{id}`")]
    UnknownStation {
        id: String,
        position: Option<Position>,
    },
}

impl ParseError {
    pub fn position(&self) -> Option<Position> {
        match self {
            ParseError::Syntax { position, .. } => Some(*position),
            ParseError::DuplicateLine { position, .. }
            | ParseError::DuplicateStation { position, .. }
            | ParseError::UnknownLine { position, .. }
            | ParseError::UnknownStation { position, .. } => *position,
        }
    }

    /// Malformed text, as opposed to well-formed text with bad references.
    pub fn is_syntax(&self) -> bool {
        matches!(self, ParseError::Syntax { .. })
    }
}

/// Failure to turn file contents into a [`TransitNetwork`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{error}")]
    Build {
        error: BuildError,
        position: Option<Position>,
    },
}

impl LoadError {
    pub fn position(&self) -> Option<Position> {
        match self {
            LoadError::Parse(e) => e.position(),
            LoadError::Build { position, .. } => *position,
        }
    }

    pub fn is_syntax(&self) -> bool {
        matches!(self, LoadError::Parse(e) if e.is_syntax())
    }
}

/// Position of the `nth` (0-based) occurrence of `"key":` in `text`.
fn locate_key(text: &str, key: &str, nth: usize) -> Option<Position> {
    let needle = format!("\"{key}\"");
    let bytes = text.as_bytes();
    let mut seen = 0;
    let mut from = 0;
    while let Some(off) = text[from..].find(&needle) {
        let start = from + off;
        from = start + needle.len();
        if start > 0 && bytes[start - 1] == b'\\' {
            continue;
        }
        let rest = text[from..].trim_start();
        if !rest.starts_with(':') {
            continue;
        }
        if seen == nth {
            return Some(position_of(text, start));
        }
        seen += 1;
    }
    None
}

fn position_of(text: &str, offset: usize) -> Position {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    Position { line, column }
}

/// Parses and cross-checks a document: every referenced line and station
/// must be declared, and declarations must be unique.
pub fn parse_network(bytes: &[u8]) -> Result<NetworkDocument, ParseError> {
    let doc: NetworkDocument = serde_json::from_slice(bytes).map_err(|e| ParseError::Syntax {
        position: Position {
            line: e.line(),
            column: e.column(),
        },
        message: e
            .to_string()
            .split(" at line ")
            .next()
            .unwrap_or_default()
            .to_owned(),
    })?;
    let text = String::from_utf8_lossy(bytes);

    let mut numbers = HashSet::new();
    for (i, line) in doc.lines.iter().enumerate() {
        if !numbers.insert(line.number) {
            return Err(ParseError::DuplicateLine {
                number: line.number,
                position: locate_key(&text, "number", i),
            });
        }
    }
    let mut ids = HashSet::new();
    for (i, station) in doc.stations.iter().enumerate() {
        if !ids.insert(station.id.as_str()) {
            return Err(ParseError::DuplicateStation {
                id: station.id.clone(),
                position: locate_key(&text, "id", i),
            });
        }
        if let Some(&number) = station.lines.iter().find(|n| !numbers.contains(n)) {
            return Err(ParseError::UnknownLine {
                number,
                referrer: format!("station `{}`", station.id),
                position: locate_key(&text, "id", i),
            });
        }
    }
    for (k, link) in doc.links.iter().enumerate() {
        for (key, id) in [("from", &link.from), ("to", &link.to)] {
            if !ids.contains(id.as_str()) {
                return Err(ParseError::UnknownStation {
                    id: id.clone(),
                    position: locate_key(&text, key, k),
                });
            }
        }
        if !numbers.contains(&link.line) {
            return Err(ParseError::UnknownLine {
                number: link.line,
                referrer: format!("link {}--{}", link.from, link.to),
                position: locate_key(&text, "line", k),
            });
        }
    }
    Ok(doc)
}

impl NetworkDocument {
    /// Sorts lines by number, stations by id (with their line lists sorted and
    /// deduplicated) and links by `(from, to, line)`; drops repeated links.
    pub fn canonicalize(&mut self) {
        self.lines.sort_by_key(|l| l.number);
        for s in &mut self.stations {
            s.lines.sort_unstable();
            s.lines.dedup();
        }
        self.stations.sort_by(|a, b| a.id.cmp(&b.id));
        self.links
            .sort_by(|a, b| (&a.from, &a.to, a.line).cmp(&(&b.from, &b.to, b.line)));
        self.links.dedup();
    }

    pub fn to_network(&self) -> Result<TransitNetwork, BuildError> {
        let palette: BTreeMap<u8, LineId> = self
            .lines
            .iter()
            .map(|l| (l.number, LineId::new(l.number, l.color.clone())))
            .collect();
        let line = |n: &u8| {
            palette
                .get(n)
                .cloned()
                .unwrap_or_else(|| LineId::new(*n, String::new()))
        };
        let stations = self
            .stations
            .iter()
            .map(|s| Station::new(s.id.clone(), s.name.clone(), s.lines.iter().map(line)))
            .collect();
        let links = self
            .links
            .iter()
            .map(|l| Link::new(l.from.clone(), l.to.clone(), [line(&l.line)]))
            .collect();
        build_network(stations, links)
    }

    /// Document describing `network`, one link entry per line of each link.
    pub fn from_network(name: impl Into<String>, network: &TransitNetwork) -> Self {
        let mut doc = NetworkDocument {
            name: name.into(),
            lines: network
                .lines()
                .iter()
                .map(|l| LineDecl {
                    number: l.number,
                    color: l.color.clone(),
                })
                .collect(),
            stations: network
                .stations()
                .iter()
                .map(|s| StationDecl {
                    id: s.id.clone(),
                    name: s.name.clone(),
                    lines: s.lines.iter().map(|l| l.number).collect(),
                })
                .collect(),
            links: network
                .links()
                .iter()
                .flat_map(|l| {
                    l.lines.iter().map(move |line| LinkDecl {
                        from: l.a.clone(),
                        to: l.b.clone(),
                        line: line.number,
                    })
                })
                .collect(),
        };
        doc.canonicalize();
        doc
    }

    /// Best-effort source position for a build error.
    fn locate_build_error(&self, text: &str, error: &BuildError) -> Option<Position> {
        let link_at = |pred: &dyn Fn(&LinkDecl) -> bool| {
            self.links
                .iter()
                .position(pred)
                .and_then(|k| locate_key(text, "from", k))
        };
        let station_at = |id: &str| {
            self.stations
                .iter()
                .position(|s| s.id == id)
                .and_then(|i| locate_key(text, "id", i))
        };
        match error {
            BuildError::SelfLoop(id) => link_at(&|l| l.from == *id && l.to == *id),
            BuildError::LineNotShared { a, b, line } => link_at(&|l| {
                l.line == *line && ((l.from == *a && l.to == *b) || (l.from == *b && l.to == *a))
            }),
            BuildError::UnknownEndpoint { station, .. } => {
                link_at(&|l| l.from == *station || l.to == *station)
            }
            BuildError::StationWithoutLines(id)
            | BuildError::InvalidLineNumber(id)
            | BuildError::DuplicateStation(id) => station_at(id),
            BuildError::EmptyStationId => station_at(""),
            _ => None,
        }
    }
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn serialize_network(doc: &NetworkDocument) -> String {
    let mut canonical = doc.clone();
    canonical.canonicalize();
    let mut out = serde_json::to_string_pretty(&canonical).expect("documents always serialize");
    out.push('\n');
    out
}

/// Parses, cross-checks and builds a network in one step.
pub fn load_network(bytes: &[u8]) -> Result<(NetworkDocument, TransitNetwork), LoadError> {
    let doc = parse_network(bytes)?;
    let network = doc.to_network().map_err(|error| LoadError::Build {
        position: doc.locate_build_error(&String::from_utf8_lossy(bytes), &error),
        error,
    })?;
    Ok((doc, network))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
  "name": "mini",
  "lines": [{ "number": 1, "color": "red" }],
  "stations": [
    { "id": "a", "name": "A", "lines": [1] },
    { "id": "b", "name": "B", "lines": [1] }
  ],
  "links": [{ "from": "a", "to": "b", "line": 1 }]
}"#;

    #[test]
    fn minimal_parses_and_round_trips() {
        let doc = parse_network(MINIMAL.as_bytes()).unwrap();
        assert_eq!(doc.stations.len(), 2);
        let text = serialize_network(&doc);
        assert_eq!(parse_network(text.as_bytes()).unwrap(), doc);
        assert_eq!(
            serialize_network(&parse_network(text.as_bytes()).unwrap()),
            text
        );
    }

    #[test]
    fn undeclared_station_is_named_and_located() {
        let text = MINIMAL.replace(r#""to": "b""#, r#""to": "X""#);
        let err = parse_network(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("`X`"));
        assert_eq!(
            err.position(),
            Some(Position {
                line: 8,
                column: 28
            })
        );
    }

    #[test]
    fn strictness() {
        let unknown = MINIMAL.replace(r#""name": "mini","#, r#""name": "mini", "extra": 1,"#);
        assert!(parse_network(unknown.as_bytes()).unwrap_err().is_syntax());
        let dup = MINIMAL.replace(r#""name": "mini","#, r#""name": "mini", "name": "again","#);
        let err = parse_network(dup.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("duplicate field"), "{err}");
        let broken = &MINIMAL[..40];
        let err = parse_network(broken.as_bytes()).unwrap_err();
        assert!(err.is_syntax());
        assert!(err.position().is_some());
    }

    #[test]
    fn reference_errors() {
        let dup_station = MINIMAL.replace(r#""id": "b""#, r#""id": "a""#);
        assert!(matches!(
            parse_network(dup_station.as_bytes()),
            Err(ParseError::DuplicateStation {
                position: Some(Position { line: 6, .. }),
                ..
            })
        ));
        let bad_line = MINIMAL.replace(r#""line": 1"#, r#""line": 4"#);
        assert!(matches!(
            parse_network(bad_line.as_bytes()),
            Err(ParseError::UnknownLine { number: 4, .. })
        ));
        let dup_line = MINIMAL.replace(
            r#"[{ "number": 1, "color": "red" }]"#,
            r#"[{ "number": 1, "color": "red" }, { "number": 1, "color": "blue" }]"#,
        );
        assert!(matches!(
            parse_network(dup_line.as_bytes()),
            Err(ParseError::DuplicateLine { number: 1, .. })
        ));
    }

    #[test]
    fn self_loop_is_located() {
        let text = MINIMAL.replace(r#""to": "b""#, r#""to": "a""#);
        let err = load_network(text.as_bytes()).unwrap_err();
        assert!(!err.is_syntax());
        assert_eq!(err.position().map(|p| p.line), Some(8));
        assert!(err.to_string().contains("a--a"));
    }

    #[test]
    fn shuffled_documents_serialize_identically() {
        let mut doc = parse_network(MINIMAL.as_bytes()).unwrap();
        let a = serialize_network(&doc);
        doc.stations.reverse();
        doc.links[0] = LinkDecl {
            from: "a".into(),
            to: "b".into(),
            line: 1,
        };
        assert_eq!(serialize_network(&doc), a);
    }

    #[test]
    fn network_round_trip() {
        let (doc, net) = load_network(MINIMAL.as_bytes()).unwrap();
        let back = NetworkDocument::from_network(doc.name.clone(), &net);
        assert_eq!(back, doc);
    }
}
