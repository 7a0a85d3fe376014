//! Multigraphs with distinguishable half-edges.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// One end of an edge. End 0 attaches to the first listed endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub end: u8,
}

impl HalfEdge {
    pub fn new(edge: EdgeId, end: u8) -> Self {
        debug_assert!(end < 2);
        HalfEdge { edge, end }
    }

    pub fn opposite(self) -> Self {
        HalfEdge { edge: self.edge, end: 1 - self.end }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v#{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub ends: [VertexId; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

/// A finite multigraph; loops and parallel edges are allowed.
///
/// Vertices and edges are addressed by dense indices. Names are carried for
/// file round trips only; the order of ids is the creation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<HalfEdge>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> VertexId {
        self.vertex_names.push(name.into());
        self.incidence.push(Vec::new());
        VertexId(self.vertex_names.len() - 1)
    }

    pub fn add_edge(&mut self, name: impl Into<String>, a: VertexId, b: VertexId) -> EdgeId {
        assert!(a.0 < self.vertex_count() && b.0 < self.vertex_count(), "endpoint out of range");
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge { name: name.into(), ends: [a, b] });
        self.incidence[a.0].push(HalfEdge::new(id, 0));
        self.incidence[b.0].push(HalfEdge::new(id, 1));
        id
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count()).map(EdgeId)
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdge> + '_ {
        self.edge_ids().flat_map(|e| [HalfEdge::new(e, 0), HalfEdge::new(e, 1)])
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn find_edge(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    /// Vertex the half-edge is attached to.
    pub fn vertex_of(&self, h: HalfEdge) -> VertexId {
        self.edges[h.edge.0].ends[h.end as usize]
    }

    /// Half-edges at `v` in insertion order; a loop contributes both ends.
    pub fn incident(&self, v: VertexId) -> &[HalfEdge] {
        &self.incidence[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.0].len()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn contains_half_edge(&self, h: HalfEdge) -> bool {
        h.edge.0 < self.edge_count() && h.end < 2
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![VertexId(0)];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &h in self.incident(v) {
                let w = self.vertex_of(h.opposite());
                if !seen[w.0] {
                    seen[w.0] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.vertex_count()
    }

    /// Connected, nonempty, and every degree even.
    pub fn is_eulerian(&self) -> bool {
        self.vertex_count() > 0
            && self.vertices().all(|v| self.degree(v).is_multiple_of(2))
            && self.is_connected()
    }

    pub fn odd_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.degree(v) % 2 == 1).collect()
    }
}

/// How odd-degree vertices are paired when augmenting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AugmentPolicy {
    /// Pair odd vertices consecutively in ascending id order.
    #[default]
    AscendingIds,
}

/// Adds one edge per pair of odd-degree vertices until every degree is even.
///
/// New edges are named `aug<k>` (with a numeric suffix bumped past any
/// existing name clash) and are appended after the existing edges, so any
/// cost table built for `g` stays valid and the new pairings default to 0.
pub fn augment_to_eulerian(g: &Graph, policy: AugmentPolicy) -> Result<Graph, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let mut out = g.clone();
    let odd = match policy {
        AugmentPolicy::AscendingIds => g.odd_vertices(),
    };
    let mut counter = 0usize;
    for pair in odd.chunks(2) {
        let name = loop {
            let candidate = format!("aug{counter}");
            counter += 1;
            if out.find_edge(&candidate).is_none() {
                break candidate;
            }
        };
        out.add_edge(name, pair[0], pair[1]);
    }
    Ok(out)
}
