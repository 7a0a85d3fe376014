use std::collections::HashMap;
use std::fmt::Write;

use super::{records, ParseError};
use crate::model::{CostEntry, EulerianCircuit, Graph, HalfEdge, Rational, TurningCostTable, VertexId};
use crate::planar::{PlanarError, PlaneGraph};

/// Contents of a graph file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub name: String,
    pub graph: Graph,
    pub costs: TurningCostTable,
    /// Cyclic half-edge order per vertex, when the file declares any.
    pub rotation: Option<Vec<Vec<HalfEdge>>>,
    pub outer: Option<usize>,
    /// Text of `#@` lines, kept verbatim.
    pub annotations: Vec<String>,
}

impl GraphFile {
    pub fn new(name: impl Into<String>, graph: Graph, costs: TurningCostTable) -> Self {
        GraphFile { name: name.into(), graph, costs, rotation: None, outer: None, annotations: Vec::new() }
    }

    /// The embedded graph, if rotations were declared. The outer face
    /// defaults to face 0.
    pub fn plane(&self) -> Option<Result<PlaneGraph, PlanarError>> {
        let rotation = self.rotation.clone()?;
        Some(PlaneGraph::new(self.graph.clone(), rotation, self.outer.unwrap_or(0)))
    }
}

fn half_edge_name(g: &Graph, h: HalfEdge) -> String {
    format!("{}.{}", g.edge_name(h.edge), h.end)
}

pub(crate) fn parse_half_edge(g: &Graph, tok: &str, line: usize) -> Result<HalfEdge, ParseError> {
    let syntax = || ParseError::Syntax { line, message: format!("`{tok}` is not a half-edge (expected <edge>.0 or <edge>.1)") };
    let (edge, end) = tok.rsplit_once('.').ok_or_else(syntax)?;
    let end = match end {
        "0" => 0,
        "1" => 1,
        _ => return Err(syntax()),
    };
    let e = g
        .find_edge(edge)
        .ok_or_else(|| ParseError::DanglingReference { line, message: format!("edge `{edge}`") })?;
    Ok(HalfEdge::new(e, end))
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let (lines, annotations) = records(text);
    let mut name: Option<String> = None;
    let mut graph = Graph::new();
    let mut vertex_ids: HashMap<&str, VertexId> = HashMap::new();
    let mut edge_names: HashMap<&str, ()> = HashMap::new();
    let syntax = |line: usize, message: &str| ParseError::Syntax { line, message: message.to_string() };

    // vertices first so edges may precede the vertices they use
    for (line, t) in &lines {
        if t[0] == "vertex" {
            if t.len() != 2 {
                return Err(syntax(*line, "expected `vertex <id>`"));
            }
            if vertex_ids.contains_key(t[1]) {
                return Err(ParseError::DuplicateId { line: *line, message: format!("vertex `{}`", t[1]) });
            }
            vertex_ids.insert(t[1], graph.add_vertex(t[1]));
        }
    }
    for (line, t) in &lines {
        let line = *line;
        match t[0] {
            "graph" => {
                if t.len() != 2 {
                    return Err(syntax(line, "expected `graph <name>`"));
                }
                if name.is_some() {
                    return Err(ParseError::DuplicateId { line, message: "second `graph` line".into() });
                }
                name = Some(t[1].to_string());
            }
            "edge" => {
                if t.len() != 4 {
                    return Err(syntax(line, "expected `edge <id> <u> <v>`"));
                }
                if t[1].contains('.') && matches!(t[1].rsplit_once('.'), Some((_, "0" | "1"))) {
                    return Err(syntax(line, "edge ids may not end in .0 or .1"));
                }
                if edge_names.insert(t[1], ()).is_some() {
                    return Err(ParseError::DuplicateId { line, message: format!("edge `{}`", t[1]) });
                }
                let [u, v] = [t[2], t[3]].map(|x| {
                    vertex_ids
                        .get(x)
                        .copied()
                        .ok_or_else(|| ParseError::DanglingReference { line, message: format!("vertex `{x}`") })
                });
                graph.add_edge(t[1], u?, v?);
            }
            "vertex" | "rotation" | "outer" | "cost" => {}
            other => return Err(syntax(line, &format!("unknown record `{other}`"))),
        }
    }

    let mut rotation: Option<Vec<Vec<HalfEdge>>> = None;
    let mut has_rotation = vec![false; graph.vertex_count()];
    let mut outer = None;
    let mut costs = TurningCostTable::new();
    for (line, t) in &lines {
        let line = *line;
        match t[0] {
            "rotation" => {
                if t.len() < 2 {
                    return Err(syntax(line, "expected `rotation <vertex> <half-edge>...`"));
                }
                let v = *vertex_ids
                    .get(t[1])
                    .ok_or_else(|| ParseError::DanglingReference { line, message: format!("vertex `{}`", t[1]) })?;
                if std::mem::replace(&mut has_rotation[v.0], true) {
                    return Err(ParseError::DuplicateId { line, message: format!("second rotation for `{}`", t[1]) });
                }
                let mut order = Vec::with_capacity(t.len() - 2);
                for tok in &t[2..] {
                    let h = parse_half_edge(&graph, tok, line)?;
                    if graph.vertex_of(h) != v {
                        return Err(ParseError::Invalid { line, message: format!("half-edge `{tok}` is not at `{}`", t[1]) });
                    }
                    if order.contains(&h) {
                        return Err(ParseError::DuplicateId { line, message: format!("half-edge `{tok}` repeated") });
                    }
                    order.push(h);
                }
                rotation.get_or_insert_with(|| vec![Vec::new(); graph.vertex_count()])[v.0] = order;
            }
            "outer" => {
                if t.len() != 2 {
                    return Err(syntax(line, "expected `outer <face-index>`"));
                }
                if outer.is_some() {
                    return Err(ParseError::DuplicateId { line, message: "second `outer` line".into() });
                }
                outer = Some(t[1].parse::<usize>().map_err(|_| syntax(line, "face index must be a non-negative integer"))?);
            }
            "cost" => {
                if t.len() != 5 {
                    return Err(syntax(line, "expected `cost <vertex> <half-edge> <half-edge> <p>/<q>|forbid`"));
                }
                let v = *vertex_ids
                    .get(t[1])
                    .ok_or_else(|| ParseError::DanglingReference { line, message: format!("vertex `{}`", t[1]) })?;
                let a = parse_half_edge(&graph, t[2], line)?;
                let b = parse_half_edge(&graph, t[3], line)?;
                let entry = if t[4] == "forbid" {
                    CostEntry::Forbidden
                } else {
                    CostEntry::Finite(
                        t[4].parse::<Rational>().map_err(|e| syntax(line, &e.to_string()))?,
                    )
                };
                if costs.entry(a, b).is_some() {
                    return Err(ParseError::DuplicateId { line, message: format!("second cost for `{}` `{}`", t[2], t[3]) });
                }
                costs
                    .set(&graph, v, a, b, entry)
                    .map_err(|e| ParseError::Invalid { line, message: e.to_string() })?;
            }
            _ => {}
        }
    }
    Ok(GraphFile {
        name: name.unwrap_or_else(|| "g".to_string()),
        graph,
        costs,
        rotation,
        outer,
        annotations,
    })
}

/// Canonical text: header, annotations, vertices and edges in id order,
/// rotations, outer face, then costs in pairing order.
pub fn emit_graph(f: &GraphFile) -> String {
    let g = &f.graph;
    let mut out = String::new();
    writeln!(out, "graph {}", f.name).unwrap();
    for a in &f.annotations {
        writeln!(out, "#@ {a}").unwrap();
    }
    for v in g.vertices() {
        writeln!(out, "vertex {}", g.vertex_name(v)).unwrap();
    }
    for e in g.edge_ids() {
        let [a, b] = g.edge(e).ends;
        writeln!(out, "edge {} {} {}", g.edge_name(e), g.vertex_name(a), g.vertex_name(b)).unwrap();
    }
    if let Some(rotation) = &f.rotation {
        for (v, order) in rotation.iter().enumerate() {
            write!(out, "rotation {}", g.vertex_name(VertexId(v))).unwrap();
            for &h in order {
                write!(out, " {}", half_edge_name(g, h)).unwrap();
            }
            out.push('\n');
        }
    }
    if let Some(o) = f.outer {
        writeln!(out, "outer {o}").unwrap();
    }
    for (&(a, b), entry) in f.costs.iter() {
        let value = match entry {
            CostEntry::Finite(c) => c.to_string(),
            CostEntry::Forbidden => "forbid".to_string(),
        };
        writeln!(
            out,
            "cost {} {} {} {value}",
            g.vertex_name(g.vertex_of(a)),
            half_edge_name(g, a),
            half_edge_name(g, b)
        )
        .unwrap();
    }
    out
}

/// Reads `circuit <name>` followed by half-edge ids; the circuit is not
/// validated against the graph here.
pub fn parse_circuit(text: &str, g: &Graph) -> Result<(String, EulerianCircuit), ParseError> {
    let (lines, _) = records(text);
    let Some((first_line, header)) = lines.first() else {
        return Err(ParseError::Syntax { line: 1, message: "empty circuit file".into() });
    };
    if header[0] != "circuit" || header.len() < 2 {
        return Err(ParseError::Syntax { line: *first_line, message: "expected `circuit <name>`".into() });
    }
    let name = header[1].to_string();
    let mut entries = Vec::new();
    for tok in &header[2..] {
        entries.push(parse_half_edge(g, tok, *first_line)?);
    }
    for (line, t) in &lines[1..] {
        if t[0] == "circuit" {
            return Err(ParseError::DuplicateId { line: *line, message: "second `circuit` line".into() });
        }
        for tok in t {
            entries.push(parse_half_edge(g, tok, *line)?);
        }
    }
    Ok((name, EulerianCircuit::new(entries)))
}

pub fn emit_circuit(name: &str, g: &Graph, c: &EulerianCircuit) -> String {
    let mut out = format!("circuit {name}\n");
    for chunk in c.entries().chunks(12) {
        let line: Vec<String> = chunk.iter().map(|&h| half_edge_name(g, h)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
