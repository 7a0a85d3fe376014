use std::fmt::Write;

use crate::model::{EulerianCircuit, Graph};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Undirected Graphviz rendering. With a circuit, every edge is drawn in
/// its traversal direction and labelled with its position `1..m`.
pub fn export_dot(name: &str, g: &Graph, circuit: Option<&EulerianCircuit>) -> String {
    let mut position = vec![None; g.edge_count()];
    if let Some(c) = circuit {
        for (i, h) in c.entries().iter().enumerate() {
            if h.edge.0 < position.len() {
                position[h.edge.0] = Some((i + 1, h.end));
            }
        }
    }
    let mut out = format!("graph {} {{\n", quote(name));
    for v in g.vertices() {
        writeln!(out, "  {};", quote(g.vertex_name(v))).unwrap();
    }
    for e in g.edge_ids() {
        let [a, b] = g.edge(e).ends;
        let name = g.edge_name(e);
        match position[e.0] {
            Some((seq, end)) => {
                let (tail, head) = if end == 0 { (a, b) } else { (b, a) };
                writeln!(
                    out,
                    "  {} -- {} [label={}, id={}, dir=forward];",
                    quote(g.vertex_name(tail)),
                    quote(g.vertex_name(head)),
                    quote(&seq.to_string()),
                    quote(name)
                )
                .unwrap();
            }
            None => {
                writeln!(
                    out,
                    "  {} -- {} [label={}];",
                    quote(g.vertex_name(a)),
                    quote(g.vertex_name(b)),
                    quote(name)
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
