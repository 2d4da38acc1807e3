use std::fmt::Write;

use pm_core::analysis::AgentConfigGraph;
use pm_core::machine::Machine;

fn quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering of an agent configuration graph. Nodes show their r
/// value and decoded configuration; initial nodes are doubly circled. Edge
/// labels name the partner node and the role (`i` or `r`).
pub fn render(m: &dyn Machine, g: &AgentConfigGraph, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", quote(name)).unwrap();
    writeln!(out, "  node [shape=ellipse, fontname=\"monospace\"];").unwrap();
    for (i, a) in g.nodes.iter().enumerate() {
        let r = g.r[i].map_or_else(|| "?".to_string(), |r| r.to_string());
        let shape = if g.initial.contains(&(i as u32)) { ", shape=doublecircle" } else { "" };
        writeln!(
            out,
            "  a{i} [label=\"a{i} r={r}\\n{}\"{shape}];",
            quote(&m.describe(a))
        )
        .unwrap();
    }
    for e in &g.edges {
        writeln!(
            out,
            "  a{} -> a{} [label=\"a{},{}\"];",
            e.from,
            e.to,
            e.partner,
            e.role.letter()
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
