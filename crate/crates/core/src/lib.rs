//! Centrality analysis for line-based transit networks.
//!
//! A network is a simple, undirected, connected graph whose stations and
//! links are annotated with the lines serving them. Distances are hop counts.
//! The engine is generic over the floating-point type through [`Scalar`];
//! the aliases at the crate root fix it to `f64`.

pub mod analytics;
pub mod document;
pub mod engine;
pub mod export;
pub mod fixture;
pub mod network;
pub mod scalar;

pub use analytics::{
    apply_scenario, line_summaries, line_summary, rank, rank_correlation, scenario_diff, spearman,
    top_count, top_fraction, AnalyticsError, Edit, FiveNumber, Scenario, ScenarioError,
};
pub use document::{
    load_network, parse_network, serialize_network, LoadError, NetworkDocument, ParseError,
    Position,
};
pub use engine::{
    all_measures, all_measures_with, bfs_row, oracle_measures, Direction, DistanceRow, EngineError,
    Measure, Parallelism,
};
pub use fixture::{load_bundled_tusrs, TUSRS_JSON};
pub use network::{
    build_network, BuildError, ClassCensus, LineId, Link, Station, StationClass, TransitNetwork,
    UnknownStation,
};
pub use scalar::Scalar;

pub type CentralityTable = engine::CentralityTable<f64>;
pub type RankedList = analytics::RankedList<f64>;
pub type RankEntry = analytics::RankEntry<f64>;
pub type LineSummary = analytics::LineSummary<f64>;
pub type ScenarioDiff = analytics::ScenarioDiff<f64>;
pub type StationDelta = analytics::StationDelta<f64>;
pub type LineDelta = analytics::LineDelta<f64>;
