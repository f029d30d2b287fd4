//! DOT emission with deterministic ordering: vertices lexicographic by key,
//! one line per geometric edge.

use std::collections::BTreeSet;

use crate::graph::FiniteGraph;
use crate::quotient::{EdgeClass, OrientationReport, TreeOfGroups};
use crate::tree::{ExploredBall, TreeHost};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// An undirected rendering of a paired-edge graph: each geometric edge once,
/// labelled by its lexicographically smaller edge id.
pub fn graph_to_dot(name: &str, graph: &FiniteGraph) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    let mut vertices: Vec<&str> = graph.vertex_ids().iter().map(|s| s.as_str()).collect();
    vertices.sort();
    for v in vertices {
        out.push_str(&format!("  {};\n", quote(v)));
    }
    let mut lines = BTreeSet::new();
    for e in graph.edges() {
        let rev = &graph.edges()[e.inverse];
        let label = if e.id < rev.id { &e.id } else { &rev.id };
        let (a, b) = {
            let o = graph.vertex_id(e.origin);
            let t = graph.vertex_id(e.terminus);
            if o <= t { (o, t) } else { (t, o) }
        };
        lines.insert(format!("  {} -- {} [label={}];\n", quote(a), quote(b), quote(label)));
    }
    for line in lines {
        out.push_str(&line);
    }
    out.push_str("}\n");
    out
}

/// The explored ball of a lazy host as an undirected DOT graph.
pub fn ball_to_dot(name: &str, host: &dyn TreeHost, ball: &ExploredBall) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    for v in ball.vertices() {
        out.push_str(&format!("  {};\n", quote(v)));
    }
    for (a, b) in ball.edges(host) {
        out.push_str(&format!("  {} -- {};\n", quote(&a), quote(&b)));
    }
    out.push_str("}\n");
    out
}

/// Orientation rendering: positive edges as arrows, degenerate geometric
/// edges dashed and annotated.
pub fn orientation_to_dot(tog: &TreeOfGroups, report: &OrientationReport) -> String {
    let graph = tog.tree().graph();
    let mut out = format!("digraph {} {{\n", quote(tog.name()));
    let mut vertices: Vec<&str> = graph.vertex_ids().iter().map(|s| s.as_str()).collect();
    vertices.sort();
    for v in vertices {
        let group = tog.vertex_group(v).map(|g| g.name()).unwrap_or("?");
        out.push_str(&format!("  {} [label={}];\n", quote(v), quote(&format!("{v}: {group}"))));
    }
    let mut lines = BTreeSet::new();
    for e in graph.edges() {
        let o = graph.vertex_id(e.origin);
        let t = graph.vertex_id(e.terminus);
        match report.local[&e.id] {
            EdgeClass::Positive => {
                lines.insert(format!("  {} -> {} [label={}];\n", quote(o), quote(t), quote(&e.id)));
            }
            EdgeClass::Negative => {} // drawn from the positive direction
            EdgeClass::DegenerateBoth | EdgeClass::DegenerateNeither => {
                if o <= t {
                    let kind = if report.local[&e.id] == EdgeClass::DegenerateBoth {
                        "degenerate: both"
                    } else {
                        "degenerate: neither"
                    };
                    lines.insert(format!(
                        "  {} -> {} [dir=none, style=dashed, label={}];\n",
                        quote(o),
                        quote(t),
                        quote(kind)
                    ));
                }
            }
        }
    }
    for line in lines {
        out.push_str(&line);
    }
    out.push_str("}\n");
    out
}
