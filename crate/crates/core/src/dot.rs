//! Graphviz rendering of the superimposed digraph and message graph.

use std::fmt::Write;

use crate::graphs::{classify, LeafClass};
use crate::model::GraphPair;

fn class_label(class: LeafClass) -> &'static str {
    match class {
        LeafClass::MessageConnected => "message-connected",
        LeafClass::MessageDisconnected => "message-disconnected",
        LeafClass::SemiDegenerated => "semi, degenerated",
        LeafClass::SemiNonDegenerated => "semi, non-degenerated",
    }
}

/// Arcs of `G` in black, edges of `U` in red without arrowheads, leaf SCCs
/// as labelled clusters and dummy vertices dashed. Vertices are numbered
/// from 1; dummies are labelled `d<k>`.
pub fn to_dot(g: &GraphPair) -> String {
    let report = classify(g);
    let mut out = String::from("digraph index_coding {\n  node [shape=circle];\n");
    let mut clustered = vec![false; g.n()];
    for (k, scc) in report.leaf_sccs().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{} {{", k + 1);
        let _ = writeln!(out, "    label=\"{}\";", class_label(report.classes[k].class));
        for &v in scc {
            clustered[v] = true;
            let _ = writeln!(out, "    {};", v + 1);
        }
        out.push_str("  }\n");
    }
    for v in g.vertices().filter(|&v| !clustered[v]) {
        if g.is_dummy(v) {
            let _ = writeln!(out, "  {} [style=dashed, label=\"d{}\"];", v + 1, v + 1);
        } else {
            let _ = writeln!(out, "  {};", v + 1);
        }
    }
    for (i, j) in g.arcs() {
        let _ = writeln!(out, "  {} -> {} [color=black];", i + 1, j + 1);
    }
    for (i, j) in g.edges() {
        let _ = writeln!(out, "  {} -> {} [dir=none, color=red];", i + 1, j + 1);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{run_algorithm1, SearchMode};
    use crate::model::fixtures::*;

    fn count(dot: &str, needle: &str) -> usize {
        dot.lines().filter(|l| l.contains(needle)).count()
    }

    #[test]
    fn worked_example_counts() {
        let dot = to_dot(&graphs(&ex_a()));
        assert_eq!(count(&dot, "[color=black]"), 6);
        assert_eq!(count(&dot, "color=red"), 9);
        let nodes = dot
            .lines()
            .filter(|l| l.trim_end().ends_with(';') && !l.contains("->") && !l.contains('=') || l.contains("style=dashed"))
            .count();
        assert_eq!(nodes, 6);
        assert_eq!(count(&dot, "subgraph cluster_"), 3);
        assert_eq!(dot, to_dot(&graphs(&ex_a())));
    }

    #[test]
    fn two_cycle_counts() {
        let dot = to_dot(&graphs(&ex_c()));
        assert_eq!(count(&dot, "[color=black]"), 2);
        assert_eq!(count(&dot, "color=red"), 0);
        assert!(dot.contains("label=\"message-disconnected\""));
    }

    #[test]
    fn dummies_are_dashed() {
        let trace = run_algorithm1(&graphs(&ex_c()), SearchMode::Deterministic);
        let dot = to_dot(&trace.state);
        assert_eq!(count(&dot, "style=dashed"), trace.dummy_count);
        assert!(trace.dummy_count > 0);
    }
}
