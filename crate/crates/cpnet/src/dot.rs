//! Graphviz export.

use std::fmt::Write;

use cpnet_core::graph::induced_preference_graph_with_budget;
use cpnet_core::{CpNet, Result};

/// `A`, `B`, ... for up to 26 variables, `v1`, `v2`, ... beyond.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if n <= 26 { char::from(b'A' + i as u8).to_string() } else { format!("v{}", i + 1) })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Dependency graph with one node per variable and an edge from each parent to its child.
pub fn dependency_dot(net: &CpNet, names: Option<&[String]>) -> String {
    let fallback = default_names(net.n());
    let names = names.filter(|n| n.len() == net.n()).unwrap_or(&fallback);
    let mut out = String::from("digraph dependencies {\n");
    for (v, name) in names.iter().enumerate() {
        let _ = writeln!(out, "  v{v} [label=\"{}\"];", escape(name));
    }
    for (p, c) in net.edges() {
        let _ = writeln!(out, "  v{p} -> v{c};");
    }
    out.push_str("}\n");
    out
}

/// Induced preference graph: one node per outcome, an edge from worse to better for every
/// improving flip.
pub fn induced_dot(net: &CpNet, budget: usize) -> Result<String> {
    let g = induced_preference_graph_with_budget(net, budget)?;
    let mut out = String::from("digraph induced {\n");
    for i in 0..g.vertex_count() {
        let label: String = g.outcome(i).values().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "  o{i} [label=\"{label}\"];");
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  o{a} -> o{b};");
    }
    out.push_str("}\n");
    Ok(out)
}
