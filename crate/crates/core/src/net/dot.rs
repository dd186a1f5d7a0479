use std::fmt::Write;

use super::{NodeId, WorkflowNet};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: places as circles, transitions as boxes, silent
/// transitions as filled black boxes.
pub fn to_dot(w: &WorkflowNet) -> String {
    let net = w.net();
    let mut out = String::from("digraph workflow_net {\n  rankdir=LR;\n");
    for p in net.places() {
        let mut attrs = format!("shape=circle, label=\"\", xlabel={}", quote(net.place_name(p)));
        if p == w.source() {
            attrs.push_str(", style=bold");
        } else if p == w.sink() {
            attrs.push_str(", peripheries=2");
        }
        writeln!(out, "  {} [{attrs}];", quote(net.place_name(p))).expect("string write");
    }
    for t in net.transitions() {
        let name = quote(net.transition_name(t));
        match net.label(t) {
            Some(a) => writeln!(out, "  {name} [shape=box, label={}];", quote(a.as_str())),
            None => writeln!(
                out,
                "  {name} [shape=box, style=filled, fillcolor=black, label=\"\", width=0.2];"
            ),
        }
        .expect("string write");
    }
    for (from, to) in net.arcs() {
        let name = |x: NodeId| quote(net.node_name(x));
        writeln!(out, "  {} -> {};", name(from), name(to)).expect("string write");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::initial_net;

    #[test]
    fn renders_nodes_and_arcs() {
        let dot = to_dot(&initial_net());
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("\"p_1\" [shape=circle"));
        assert!(dot.contains("\"t_start\" [shape=box, style=filled, fillcolor=black"));
        assert!(dot.contains("\"p_s\" -> \"t_start\";"));
    }
}
