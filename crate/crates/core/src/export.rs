//! GraphML and Graphviz DOT renderings of a network annotated with its
//! centrality values.

use std::fmt::Write;

use crate::engine::CentralityTable;
use crate::network::{Station, TransitNetwork};
use crate::scalar::Scalar;

/// Reals in every export use six decimals.
pub fn fixed6<F: Scalar>(value: F) -> String {
    format!("{:.6}", value.to_f64_lossy())
}

fn line_numbers(station: &Station) -> String {
    station
        .lines
        .iter()
        .map(|l| l.number.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Map color of a station: its lowest-numbered line's color.
pub fn station_color(station: &Station) -> &str {
    station.lines.iter().next().map_or("", |l| l.color.as_str())
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

const NODE_KEYS: [(&str, &str); 9] = [
    ("name", "string"),
    ("lines", "string"),
    ("color", "string"),
    ("class", "string"),
    ("degree", "int"),
    ("closeness", "double"),
    ("betweenness", "double"),
    ("eccentricity", "int"),
    ("line_colors", "string"),
];

const EDGE_KEYS: [(&str, &str); 2] = [("lines", "string"), ("edge_betweenness", "double")];

pub fn to_graphml<F: Scalar>(
    name: &str,
    network: &TransitNetwork,
    table: &CentralityTable<F>,
) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    for (key, ty) in NODE_KEYS {
        let _ = writeln!(
            out,
            "  <key id=\"n_{key}\" for=\"node\" attr.name=\"{key}\" attr.type=\"{ty}\"/>"
        );
    }
    for (key, ty) in EDGE_KEYS {
        let _ = writeln!(
            out,
            "  <key id=\"e_{key}\" for=\"edge\" attr.name=\"{key}\" attr.type=\"{ty}\"/>"
        );
    }
    let _ = writeln!(
        out,
        "  <graph id=\"{}\" edgedefault=\"undirected\">",
        xml_escape(name)
    );
    for (i, s) in network.stations().iter().enumerate() {
        let colors: Vec<&str> = s.lines.iter().map(|l| l.color.as_str()).collect();
        let values = [
            s.name.clone(),
            line_numbers(s),
            station_color(s).to_owned(),
            network.class_of(i).to_string(),
            table.degree[i].to_string(),
            fixed6(table.closeness[i]),
            fixed6(table.betweenness[i]),
            table.eccentricity[i].to_string(),
            colors.join(";"),
        ];
        let _ = writeln!(out, "    <node id=\"{}\">", xml_escape(&s.id));
        for ((key, _), value) in NODE_KEYS.iter().zip(values) {
            let _ = writeln!(
                out,
                "      <data key=\"n_{key}\">{}</data>",
                xml_escape(&value)
            );
        }
        out.push_str("    </node>\n");
    }
    for (k, link) in network.links().iter().enumerate() {
        let lines: Vec<String> = link.lines.iter().map(|l| l.number.to_string()).collect();
        let _ = writeln!(
            out,
            "    <edge id=\"e{k}\" source=\"{}\" target=\"{}\">",
            xml_escape(&link.a),
            xml_escape(&link.b)
        );
        let _ = writeln!(
            out,
            "      <data key=\"e_lines\">{}</data>",
            lines.join(";")
        );
        let _ = writeln!(
            out,
            "      <data key=\"e_edge_betweenness\">{}</data>",
            fixed6(table.edge_betweenness[k])
        );
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Graphviz color name for a palette entry: `dark blue` becomes `darkblue`.
fn graphviz_color(color: &str) -> String {
    color.split_whitespace().collect()
}

pub fn to_dot<F: Scalar>(
    name: &str,
    network: &TransitNetwork,
    table: &CentralityTable<F>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", dot_escape(name));
    for (i, s) in network.stations().iter().enumerate() {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\", color=\"{}\", lines=\"{}\", class=\"{}\", degree={}, closeness={}, betweenness={}, eccentricity={}];",
            dot_escape(&s.id),
            dot_escape(&s.name),
            graphviz_color(station_color(s)),
            line_numbers(s),
            network.class_of(i),
            table.degree[i],
            fixed6(table.closeness[i]),
            fixed6(table.betweenness[i]),
            table.eccentricity[i],
        );
    }
    for (k, link) in network.links().iter().enumerate() {
        let lines: Vec<String> = link.lines.iter().map(|l| l.number.to_string()).collect();
        let color = link
            .lines
            .iter()
            .next()
            .map_or(String::new(), |l| graphviz_color(&l.color));
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [lines=\"{}\", color=\"{}\", edge_betweenness={}];",
            dot_escape(&link.a),
            dot_escape(&link.b),
            lines.join(";"),
            color,
            fixed6(table.edge_betweenness[k]),
        );
    }
    out.push_str("}\n");
    out
}
