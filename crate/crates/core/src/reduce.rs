//! Reduction of the turning-cost problem to a travelling-salesman instance.
//!
//! Every edge is subdivided twice so the result is simple, the weighted
//! line graph of that subdivision is formed, and Hamiltonian cycles of the
//! line graph are read back as Eulerian circuits of the original graph.

use std::collections::HashMap;

use thiserror::Error;

use crate::exact::held_karp::{common_scale, HeldKarpError, WeightedGraph, MAX_BITMASK_LIMIT};
use crate::model::{
    EdgeId, EulerianCircuit, Graph, HalfEdge, Rational, TurningCostTable, VertexId,
};

/// Position of a replacement edge along its original edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Segment {
    /// Attached to the original endpoint at this end of the original edge.
    End(u8),
    Center,
}

#[derive(Clone, Debug)]
pub struct SubdividedGraph {
    pub graph: Graph,
    pub costs: TurningCostTable,
    /// Per original edge: `[end-0 segment, center, end-1 segment]`.
    pub parts: Vec<[EdgeId; 3]>,
    /// Per replacement edge: the original edge and the segment it is.
    pub origin: Vec<(EdgeId, Segment)>,
    pub original_vertices: usize,
    pub construction_ops: u64,
}

fn segment_names(g: &Graph, e: EdgeId) -> [String; 3] {
    let name = g.edge_name(e);
    if g.edge(e).is_loop() {
        [format!("{name}_u1"), format!("{name}_c"), format!("{name}_u2")]
    } else {
        [format!("{name}_u"), format!("{name}_c"), format!("{name}_v")]
    }
}

/// Replaces every edge `e` by the path `e_u e_c e_v`.
///
/// End segments start at the original endpoint, so original half-edge
/// `(e, k)` corresponds to half-edge `(parts[e][k or 2], 0)` of the output.
/// Pairings between end segments copy the original costs (forbidden stays
/// forbidden, so big-M is unchanged); everything else is free.
pub fn subdivide_twice(g: &Graph, w: &TurningCostTable) -> SubdividedGraph {
    let mut ops = 0u64;
    let mut out = Graph::new();
    for v in g.vertices() {
        out.add_vertex(g.vertex_name(v));
        ops += 1;
    }
    let mut parts = Vec::with_capacity(g.edge_count());
    let mut origin = Vec::with_capacity(3 * g.edge_count());
    for e in g.edge_ids() {
        let [a, b] = g.edge(e).ends;
        let name = g.edge_name(e);
        let s0 = out.add_vertex(format!("{name}_s0"));
        let s1 = out.add_vertex(format!("{name}_s1"));
        let [n0, nc, n1] = segment_names(g, e);
        let p0 = out.add_edge(n0, a, s0);
        let pc = out.add_edge(nc, s0, s1);
        let p1 = out.add_edge(n1, b, s1);
        parts.push([p0, pc, p1]);
        origin.extend([(e, Segment::End(0)), (e, Segment::Center), (e, Segment::End(1))]);
        ops += 5;
    }
    let lift = |h: HalfEdge| HalfEdge::new(parts[h.edge.0][2 * h.end as usize], 0);
    let mut costs = TurningCostTable::new();
    for (&(a, b), entry) in w.iter() {
        costs
            .set(&out, g.vertex_of(a), lift(a), lift(b), entry.clone())
            .expect("end segments share the original vertex");
        ops += 1;
    }
    SubdividedGraph {
        graph: out,
        costs,
        parts,
        origin,
        original_vertices: g.vertex_count(),
        construction_ops: ops,
    }
}

impl SubdividedGraph {
    /// Segment half-edge at the original vertex for original half-edge `h`.
    pub fn segment_at(&self, h: HalfEdge) -> HalfEdge {
        HalfEdge::new(self.parts[h.edge.0][2 * h.end as usize], 0)
    }

    /// Image of an original circuit: each entry expands to three entries.
    pub fn expand_circuit(&self, c: &EulerianCircuit) -> EulerianCircuit {
        let mut entries = Vec::with_capacity(3 * c.len());
        for h in c.entries() {
            let [p0, pc, p1] = self.parts[h.edge.0];
            if h.end == 0 {
                entries.extend([HalfEdge::new(p0, 0), HalfEdge::new(pc, 0), HalfEdge::new(p1, 1)]);
            } else {
                entries.extend([HalfEdge::new(p1, 0), HalfEdge::new(pc, 1), HalfEdge::new(p0, 1)]);
            }
        }
        EulerianCircuit::new(entries)
    }

    /// Inverse of [`expand_circuit`](Self::expand_circuit) on circuits of
    /// the subdivided graph; `None` if the input is not an expansion.
    pub fn contract_circuit(&self, c: &EulerianCircuit) -> Option<EulerianCircuit> {
        let mut out = Vec::new();
        for h in c.entries() {
            let (e, seg) = self.origin[h.edge.0];
            // an end segment entered from the original vertex starts a traversal
            if let Segment::End(k) = seg {
                if h.end == 0 {
                    out.push(HalfEdge::new(e, k));
                }
            }
        }
        let back = EulerianCircuit::new(out);
        (self.expand_circuit(&back).canonical() == c.canonical()).then_some(back)
    }
}

/// What a line-graph node stands for in the original graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeRole {
    End { edge: EdgeId, end: u8 },
    Center { edge: EdgeId },
}

#[derive(Clone, Debug)]
pub struct LineGraphInstance {
    /// Node `i` is replacement edge `EdgeId(i)` of the subdivided graph.
    pub tsp: WeightedGraph,
    pub roles: Vec<NodeRole>,
    /// Per arc `(a, b)` with `a < b`: the subdivided-graph vertex where the
    /// two segments meet and the pairing that produced it.
    pub arc_origin: HashMap<(usize, usize), (VertexId, HalfEdge, HalfEdge)>,
    pub original_edges: usize,
    pub construction_ops: u64,
}

impl LineGraphInstance {
    pub fn end_node(&self, h: HalfEdge) -> usize {
        3 * h.edge.0 + 2 * h.end as usize
    }

    pub fn center_node(&self, e: EdgeId) -> usize {
        3 * e.0 + 1
    }

    /// Hamiltonian cycle corresponding to a circuit of the original graph.
    pub fn cycle_of(&self, c: &EulerianCircuit) -> Vec<usize> {
        c.entries()
            .iter()
            .flat_map(|&h| [self.end_node(h), self.center_node(h.edge), self.end_node(h.opposite())])
            .collect()
    }
}

/// Weighted line graph of a subdivided graph.
pub fn line_graph_weighted(s: &SubdividedGraph) -> LineGraphInstance {
    let g = &s.graph;
    let mut ops = 0u64;
    let mut tsp = WeightedGraph::new();
    let mut roles = Vec::with_capacity(g.edge_count());
    for e in g.edge_ids() {
        tsp.add_node(g.edge_name(e));
        let (orig, seg) = s.origin[e.0];
        roles.push(match seg {
            Segment::End(k) => NodeRole::End { edge: orig, end: k },
            Segment::Center => NodeRole::Center { edge: orig },
        });
        ops += 1;
    }
    let big_m = s.costs.big_m();
    let mut arc_origin = HashMap::new();
    for v in g.vertices() {
        let inc = g.incident(v);
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let (a, b) = (inc[i], inc[j]);
                let weight = s.costs.cost_with(a, b, &big_m);
                tsp.add_arc(a.edge.0, b.edge.0, weight).expect("subdivided graph is simple");
                let key = (a.edge.0.min(b.edge.0), a.edge.0.max(b.edge.0));
                arc_origin.insert(key, (v, a, b));
                ops += 1;
            }
        }
    }
    LineGraphInstance {
        tsp,
        roles,
        arc_origin,
        original_edges: s.parts.len(),
        construction_ops: ops,
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("malformed Hamiltonian cycle: {0}")]
    MalformedCycle(String),
}

/// Reads a Hamiltonian cycle of the line graph as an Eulerian circuit of the
/// original graph. Every center node has degree 2, so a valid cycle is a
/// sequence of `end, center, end` triples, one per original edge.
pub fn lift_hamiltonian(l: &LineGraphInstance, h: &[usize]) -> Result<EulerianCircuit, LiftError> {
    let bad = |msg: String| Err(LiftError::MalformedCycle(msg));
    let n = l.tsp.node_count();
    if h.len() != n {
        return bad(format!("expected {n} nodes, got {}", h.len()));
    }
    let mut seen = vec![false; n];
    for &x in h {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return bad(format!("node {x} is unknown or repeated"));
        }
    }
    for i in 0..n {
        if l.tsp.weight(h[i], h[(i + 1) % n]).is_none() {
            return bad(format!("nodes {} and {} are not adjacent", h[i], h[(i + 1) % n]));
        }
    }
    if n == 0 {
        return Ok(EulerianCircuit::new(Vec::new()));
    }
    let first_center = h
        .iter()
        .position(|&x| matches!(l.roles[x], NodeRole::Center { .. }))
        .expect("every original edge has a center node");
    let offset = (first_center + n - 1) % n;
    let mut entries = Vec::with_capacity(n / 3);
    for t in 0..n / 3 {
        let at = |k: usize| l.roles[h[(offset + 3 * t + k) % n]];
        match (at(0), at(1), at(2)) {
            (
                NodeRole::End { edge: a, end: k },
                NodeRole::Center { edge: c },
                NodeRole::End { edge: b, end: k2 },
            ) if a == c && b == c && k2 == 1 - k => entries.push(HalfEdge::new(a, k)),
            _ => return bad(format!("triple {t} is not end-center-end of one edge")),
        }
    }
    Ok(EulerianCircuit::new(entries))
}

/// Minimum over Hamiltonian cycles using one DP node per original edge.
///
/// The forced `end, center, end` triples are contracted; a state is the set
/// of traversed edges plus the half-edge through which the last edge was
/// entered. Returns the weight and the expanded Hamiltonian cycle.
pub fn held_karp_contracted(
    l: &LineGraphInstance,
    limit: usize,
) -> Result<Option<(Rational, Vec<usize>)>, HeldKarpError> {
    let m = l.original_edges;
    let limit = limit.min(MAX_BITMASK_LIMIT);
    if m > limit {
        return Err(HeldKarpError::TooLarge { nodes: m, limit });
    }
    if m == 0 {
        return Ok(Some((Rational::zero(), Vec::new())));
    }
    let scale = common_scale((0..l.tsp.node_count()).flat_map(|x| l.tsp.neighbors(x)).map(|(_, w)| w));
    // transitions out of each exit half-edge: (next entry, scaled weight)
    let halves = |e: usize| [HalfEdge::new(EdgeId(e), 0), HalfEdge::new(EdgeId(e), 1)];
    let slot = |h: HalfEdge| 2 * h.edge.0 + h.end as usize;
    let mut step: Vec<Vec<(HalfEdge, i128)>> = vec![Vec::new(); 2 * m];
    for e in 0..m {
        for exit in halves(e) {
            let from = l.end_node(exit);
            let mut list = Vec::new();
            for (to, w) in l.tsp.neighbors(from) {
                if let NodeRole::End { edge, end } = l.roles[*to] {
                    let scaled = w.scaled_integer(&scale).ok_or(HeldKarpError::Overflow)?;
                    list.push((HalfEdge::new(edge, end), scaled));
                }
            }
            list.sort();
            step[slot(exit)] = list;
        }
    }
    let start = HalfEdge::new(EdgeId(0), 0);
    type Layer = HashMap<(u64, HalfEdge), (i128, Option<HalfEdge>)>;
    let mut layers: Vec<Layer> = Vec::with_capacity(m);
    layers.push(Layer::from([((1u64, start), (0, None))]));
    for _ in 1..m {
        let prev = layers.last().unwrap();
        let mut next = Layer::with_capacity(prev.len() * 2);
        for (&(mask, last), &(cost, _)) in prev {
            for &(entry, w) in &step[slot(last.opposite())] {
                if mask & (1 << entry.edge.0) != 0 {
                    continue;
                }
                let cand = cost.checked_add(w).ok_or(HeldKarpError::Overflow)?;
                let key = (mask | (1 << entry.edge.0), entry);
                let value = (cand, Some(last));
                match next.get_mut(&key) {
                    Some(slot) if value < *slot => *slot = value,
                    Some(_) => {}
                    None => {
                        next.insert(key, value);
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        layers.push(next);
    }
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut best: Option<(i128, HalfEdge)> = None;
    for (&(mask, last), &(cost, _)) in &layers[m - 1] {
        if mask != full {
            continue;
        }
        if let Some(&(_, w)) = step[slot(last.opposite())].iter().find(|(h, _)| *h == start) {
            let cand = (cost.checked_add(w).ok_or(HeldKarpError::Overflow)?, last);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    let Some((total, mut last)) = best else {
        return Ok(None);
    };
    let mut entries = Vec::with_capacity(m);
    let mut mask = full;
    for depth in (0..m).rev() {
        entries.push(last);
        let (_, prev) = layers[depth][&(mask, last)];
        mask &= !(1 << last.edge.0);
        if let Some(p) = prev {
            last = p;
        }
    }
    entries.reverse();
    let cycle = l.cycle_of(&EulerianCircuit::new(entries));
    Ok(Some((Rational::from_scaled(total, &scale), cycle)))
}
