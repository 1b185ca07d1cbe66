//! Text, CSV and JSON renderings of command results. Reals use six decimals.

use std::cmp::Reverse;

use netcentral_core::export::fixed6;
use netcentral_core::{
    CentralityTable, LineSummary, Measure, RankedList, Scenario, ScenarioDiff, Station,
    StationClass, StationDelta, TransitNetwork,
};
use serde_json::{json, Value};

fn csv_text(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("records are UTF-8")
}

fn line_list(station: &Station) -> String {
    station
        .lines
        .iter()
        .map(|l| l.number.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn validation(name: &str, network: &TransitNetwork) -> String {
    let census = network.class_census();
    let classes: Vec<String> = StationClass::ALL
        .iter()
        .map(|&c| format!("{c} {}", census.get(c)))
        .collect();
    format!(
        "network: {name}\n{} stations\n{} links\n{} lines\nclasses: {}\nconnected: yes\n",
        network.station_count(),
        network.link_count(),
        network.lines().len(),
        classes.join(", ")
    )
}

/// Link indices by edge betweenness descending, then by endpoint ids.
fn edge_order(table: &CentralityTable) -> Vec<usize> {
    let mut order: Vec<usize> = (0..table.links.len()).collect();
    order.sort_by(|&i, &j| {
        table.edge_betweenness[j]
            .total_cmp(&table.edge_betweenness[i])
            .then_with(|| table.links[i].cmp(&table.links[j]))
    });
    order
}

fn link_lines(network: &TransitNetwork, k: usize) -> Vec<u8> {
    network.links()[k].lines.iter().map(|l| l.number).collect()
}

/// Station table, a blank line, then the link table.
pub fn analysis_csv(network: &TransitNetwork, table: &CentralityTable) -> String {
    let mut stations = vec![[
        "id",
        "name",
        "lines",
        "degree",
        "closeness",
        "betweenness",
        "eccentricity",
        "class",
    ]
    .map(String::from)
    .to_vec()];
    for (i, s) in network.stations().iter().enumerate() {
        stations.push(vec![
            s.id.clone(),
            s.name.clone(),
            line_list(s),
            table.degree[i].to_string(),
            fixed6(table.closeness[i]),
            fixed6(table.betweenness[i]),
            table.eccentricity[i].to_string(),
            network.class_of(i).to_string(),
        ]);
    }
    let mut links = vec![["from", "to", "lines", "edge_betweenness"]
        .map(String::from)
        .to_vec()];
    for k in edge_order(table) {
        let lines: Vec<String> = link_lines(network, k).iter().map(u8::to_string).collect();
        links.push(vec![
            table.links[k].0.clone(),
            table.links[k].1.clone(),
            lines.join(";"),
            fixed6(table.edge_betweenness[k]),
        ]);
    }
    format!("{}\n{}", csv_text(stations), csv_text(links))
}

fn round6(x: f64) -> Value {
    json!((x * 1e6).round() / 1e6)
}

pub fn analysis_json(name: &str, network: &TransitNetwork, table: &CentralityTable) -> String {
    let stations: Vec<Value> = network
        .stations()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            json!({
                "id": s.id,
                "name": s.name,
                "lines": s.lines.iter().map(|l| l.number).collect::<Vec<_>>(),
                "degree": table.degree[i],
                "closeness": round6(table.closeness[i]),
                "betweenness": round6(table.betweenness[i]),
                "eccentricity": table.eccentricity[i],
                "class": network.class_of(i).as_str(),
            })
        })
        .collect();
    let links: Vec<Value> = edge_order(table)
        .into_iter()
        .map(|k| {
            json!({
                "from": table.links[k].0,
                "to": table.links[k].1,
                "lines": link_lines(network, k),
                "edge_betweenness": round6(table.edge_betweenness[k]),
            })
        })
        .collect();
    let doc = json!({ "network": name, "stations": stations, "links": links });
    let mut text = serde_json::to_string_pretty(&doc).expect("values serialize");
    text.push('\n');
    text
}

pub fn ranking_csv(network: &TransitNetwork, ranked: &RankedList) -> String {
    let mut rows = vec![["rank", "station", "name", "value", "lines"]
        .map(String::from)
        .to_vec()];
    for e in &ranked.entries {
        let s = network.station(
            network
                .index_of(&e.station_id)
                .expect("ranked stations exist"),
        );
        rows.push(vec![
            e.rank.to_string(),
            s.id.clone(),
            s.name.clone(),
            fixed6(e.value),
            line_list(s),
        ]);
    }
    csv_text(rows)
}

pub fn lines_csv(summaries: &[LineSummary]) -> String {
    let mut rows = vec![[
        "line", "color", "stations", "min", "q1", "median", "q3", "max",
    ]
    .map(String::from)
    .to_vec()];
    for s in summaries {
        let f = &s.summary;
        rows.push(vec![
            s.line.number.to_string(),
            s.line.color.clone(),
            s.station_count.to_string(),
            fixed6(f.min),
            fixed6(f.q1),
            fixed6(f.median),
            fixed6(f.q3),
            fixed6(f.max),
        ]);
    }
    csv_text(rows)
}

fn signed6(x: f64) -> String {
    if x < 0.0 {
        fixed6(x)
    } else {
        format!("+{}", fixed6(x))
    }
}

/// Rank movements of the compared measure and per-line mean changes.
pub fn scenario(scenario: &Scenario, diff: &ScenarioDiff, compare: Measure) -> String {
    let d = diff.measure(compare);
    let mut out = String::new();
    out.push_str("edits:\n");
    for e in &scenario.edits {
        out.push_str(&format!("  {e}\n"));
    }
    out.push_str(&format!(
        "stations: {} -> {}\nlinks: {} -> {}\nmeasure: {compare}\n",
        scenario.base.station_count(),
        scenario.result.station_count(),
        scenario.base.link_count(),
        scenario.result.link_count(),
    ));

    let created: Vec<&StationDelta> = d.stations.iter().filter(|s| s.old.is_none()).collect();
    let removed: Vec<&StationDelta> = d.stations.iter().filter(|s| s.new.is_none()).collect();
    if !created.is_empty() {
        out.push_str("created:\n");
        for s in created {
            let p = s.new.expect("created stations exist afterwards");
            out.push_str(&format!(
                "  {} rank {} value {}\n",
                s.station_id,
                p.rank,
                fixed6(p.value)
            ));
        }
    }
    if !removed.is_empty() {
        out.push_str("removed:\n");
        for s in removed {
            let p = s.old.expect("removed stations existed before");
            out.push_str(&format!(
                "  {} rank {} value {}\n",
                s.station_id,
                p.rank,
                fixed6(p.value)
            ));
        }
    }

    let mut moved: Vec<&StationDelta> = d
        .stations
        .iter()
        .filter(|s| s.rank_gain().is_some_and(|g| g != 0))
        .collect();
    moved.sort_by_key(|s| {
        (
            Reverse(s.rank_gain().unwrap_or(0).unsigned_abs()),
            s.station_id.clone(),
        )
    });
    out.push_str("rank movements (top 20 by absolute change):\n");
    for s in moved.into_iter().take(20) {
        let (o, n) = (s.old.expect("kept"), s.new.expect("kept"));
        out.push_str(&format!(
            "  {} rank {} -> {} value {} -> {}\n",
            s.station_id,
            o.rank,
            n.rank,
            fixed6(o.value),
            fixed6(n.value)
        ));
    }
    out.push_str("line means:\n");
    for l in &d.lines {
        let show = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), fixed6);
        let change = l.change().map_or_else(|| "-".to_owned(), signed6);
        out.push_str(&format!(
            "  line {} ({}): {} -> {} ({change})\n",
            l.line.number,
            l.line.color,
            show(l.old_mean),
            show(l.new_mean)
        ));
    }
    out
}
