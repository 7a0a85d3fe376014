//! Degree reduction for gadget graphs.
//!
//! A variable vertex of degree `4k+2` becomes a `(2k+1)`-cycle with tripled
//! edges and two pendant slots per cycle vertex; the apex of degree `2d`
//! becomes the product of a `2d`-cycle and a path on `d` vertices. Every
//! replacement vertex has degree at most 8 and both replacements keep the
//! existence of a zero-cost circuit unchanged.

use thiserror::Error;

use crate::model::{EdgeId, EulerianCircuit, Graph, HalfEdge, Rational, TurningCostTable, VertexId};
use crate::sat::GadgetGraph;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BlowupError {
    #[error("degree {0} cannot be blown up here")]
    BadDegree(usize),
    #[error("vertex {name} has degree {degree}, a multiple of 4; normalize first")]
    DegreeDivisibleBy4 { name: String, degree: usize },
    #[error("not a perfect pairing of the pendant labels: {0}")]
    NotPerfectPairing(String),
}

/// Cycle vertex and side (outer or inner) of pendant label `j` (1-based).
fn variable_label_slot(k: usize, j: usize) -> (usize, bool) {
    let n = 2 * k + 1;
    ((j - 1) % n, (j - 1).is_multiple_of(2))
}

/// Adds the three copies of every cycle edge; `copies[t][c]` joins `c_t` to
/// `c_{t+1}` with end 0 at `c_t`, copy 0 outermost.
fn add_cycle_copies(g: &mut Graph, cycle: &[VertexId], prefix: &str) -> Vec<[EdgeId; 3]> {
    let n = cycle.len();
    (0..n)
        .map(|t| [0, 1, 2].map(|c| g.add_edge(format!("{prefix}c{t}_{c}"), cycle[t], cycle[(t + 1) % n])))
        .collect()
}

/// Rotation at `c_t`: outer pendant, copies towards `c_{t+1}` from outside
/// in, inner pendant, copies towards `c_{t-1}` from inside out.
fn cycle_rotation(copies: &[[EdgeId; 3]], outer: &[HalfEdge], inner: &[HalfEdge]) -> Vec<Vec<HalfEdge>> {
    let n = copies.len();
    (0..n)
        .map(|t| {
            let prev = copies[(t + n - 1) % n];
            let next = copies[t];
            vec![
                outer[t],
                HalfEdge::new(next[0], 0),
                HalfEdge::new(next[1], 0),
                HalfEdge::new(next[2], 0),
                inner[t],
                HalfEdge::new(prev[2], 1),
                HalfEdge::new(prev[1], 1),
                HalfEdge::new(prev[0], 1),
            ]
        })
        .collect()
}

/// Cost 1 on every pairing that is not rotation-consecutive.
fn charge_non_consecutive(g: &Graph, rotation: &[HalfEdge], w: &mut TurningCostTable) {
    let d = rotation.len();
    for i in 0..d {
        for j in i + 1..d {
            if j != i + 1 && !(i == 0 && j == d - 1) {
                w.set_cost(g, rotation[i], rotation[j], Rational::one()).expect("same vertex");
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct VariableBlowup {
    pub k: usize,
    pub graph: Graph,
    pub costs: TurningCostTable,
    pub cycle: Vec<VertexId>,
    /// `rotation[t]` is the cyclic order at `cycle[t]`.
    pub rotation: Vec<Vec<HalfEdge>>,
    /// `labels[j-1]` is pendant `e_j`, with end 0 on the cycle.
    pub labels: Vec<EdgeId>,
    pub copies: Vec<[EdgeId; 3]>,
}

pub fn build_variable_blowup(degree: usize) -> Result<VariableBlowup, BlowupError> {
    if degree <= 8 || degree % 4 != 2 {
        return Err(BlowupError::BadDegree(degree));
    }
    let k = (degree - 2) / 4;
    let n = 2 * k + 1;
    let mut graph = Graph::new();
    let cycle: Vec<VertexId> = (0..n).map(|t| graph.add_vertex(format!("c{t}"))).collect();
    let mut outer = vec![None; n];
    let mut inner = vec![None; n];
    let mut labels = Vec::with_capacity(degree);
    for j in 1..=degree {
        let (t, out) = variable_label_slot(k, j);
        let leaf = graph.add_vertex(format!("p{j}"));
        let e = graph.add_edge(format!("e{j}"), cycle[t], leaf);
        labels.push(e);
        *(if out { &mut outer[t] } else { &mut inner[t] }) = Some(HalfEdge::new(e, 0));
    }
    let copies = add_cycle_copies(&mut graph, &cycle, "");
    let outer: Vec<HalfEdge> = outer.into_iter().map(Option::unwrap).collect();
    let inner: Vec<HalfEdge> = inner.into_iter().map(Option::unwrap).collect();
    let rotation = cycle_rotation(&copies, &outer, &inner);
    let mut costs = TurningCostTable::new();
    for r in &rotation {
        charge_non_consecutive(&graph, r, &mut costs);
    }
    Ok(VariableBlowup { k, graph, costs, cycle, rotation, labels, copies })
}

#[derive(Clone, Debug)]
pub struct ApexBlowup {
    pub d: usize,
    pub graph: Graph,
    /// `layers[l][i]`: column `i` of the `l`-th concentric cycle; layer 0
    /// carries the pendants and layer `d-1` the doubled edges.
    pub layers: Vec<Vec<VertexId>>,
    /// `ring[l][i]` joins columns `i` and `i+1` of layer `l` (end 0 at `i`).
    pub ring: Vec<Vec<EdgeId>>,
    /// `rungs[l][i]` joins layer `l` to `l+1` in column `i` (end 0 at `l`).
    pub rungs: Vec<Vec<EdgeId>>,
    /// Parallel copies of `ring[d-1][i]` for even `i`.
    pub doubles: Vec<EdgeId>,
    /// `pendants[j-1]` is `f_j`, with end 0 on layer 0.
    pub pendants: Vec<EdgeId>,
}

struct Grid {
    layers: Vec<Vec<VertexId>>,
    ring: Vec<Vec<EdgeId>>,
    rungs: Vec<Vec<EdgeId>>,
    doubles: Vec<EdgeId>,
}

fn add_grid_vertices(g: &mut Graph, d: usize, prefix: &str) -> Vec<Vec<VertexId>> {
    (0..d)
        .map(|l| (0..2 * d).map(|i| g.add_vertex(format!("{prefix}b{l}_{i}"))).collect())
        .collect()
}

fn add_grid_edges(g: &mut Graph, layers: Vec<Vec<VertexId>>, prefix: &str) -> Grid {
    let d = layers.len();
    let w = 2 * d;
    let ring = (0..d)
        .map(|l| (0..w).map(|i| g.add_edge(format!("{prefix}r{l}_{i}"), layers[l][i], layers[l][(i + 1) % w])).collect())
        .collect();
    let rungs = (0..d - 1)
        .map(|l| (0..w).map(|i| g.add_edge(format!("{prefix}s{l}_{i}"), layers[l][i], layers[l + 1][i])).collect())
        .collect();
    let doubles = (0..w)
        .step_by(2)
        .map(|i| g.add_edge(format!("{prefix}r{}_{i}x", d - 1), layers[d - 1][i], layers[d - 1][(i + 1) % w]))
        .collect();
    Grid { layers, ring, rungs, doubles }
}

pub fn build_apex_blowup(degree: usize) -> Result<ApexBlowup, BlowupError> {
    if degree % 2 == 1 || degree < 4 {
        return Err(BlowupError::BadDegree(degree));
    }
    let d = degree / 2;
    let mut graph = Graph::new();
    let layers = add_grid_vertices(&mut graph, d, "");
    let pendants = (1..=degree)
        .map(|j| {
            let leaf = graph.add_vertex(format!("q{j}"));
            graph.add_edge(format!("f{j}"), layers[0][j - 1], leaf)
        })
        .collect();
    let grid = add_grid_edges(&mut graph, layers, "");
    Ok(ApexBlowup {
        d,
        graph,
        layers: grid.layers,
        ring: grid.ring,
        rungs: grid.rungs,
        doubles: grid.doubles,
        pendants,
    })
}

/// Edge-disjoint trails, one per pair, from the leaf of the first pendant to
/// the leaf of the second. Pair `p` descends to layer `p`, follows that
/// cycle forward, and climbs back up the partner's column.
pub fn route_apex_paths(b: &ApexBlowup, pairing: &[(usize, usize)]) -> Result<Vec<Vec<HalfEdge>>, BlowupError> {
    let n = 2 * b.d;
    let mut seen = vec![false; n + 1];
    if pairing.len() != b.d {
        return Err(BlowupError::NotPerfectPairing(format!("{} pairs for {} pendants", pairing.len(), n)));
    }
    for &(i, j) in pairing {
        for x in [i, j] {
            if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
                return Err(BlowupError::NotPerfectPairing(format!("label {x} is out of range or repeated")));
            }
        }
    }
    let paths = pairing
        .iter()
        .enumerate()
        .map(|(layer, &(i, j))| {
            let (ci, cj) = (i - 1, j - 1);
            let mut path = vec![HalfEdge::new(b.pendants[ci], 1)];
            path.extend((0..layer).map(|l| HalfEdge::new(b.rungs[l][ci], 0)));
            let mut c = ci;
            while c != cj {
                path.push(HalfEdge::new(b.ring[layer][c], 0));
                c = (c + 1) % n;
            }
            path.extend((0..layer).rev().map(|l| HalfEdge::new(b.rungs[l][cj], 1)));
            path.push(HalfEdge::new(b.pendants[cj], 0));
            path
        })
        .collect();
    Ok(paths)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Variable { k: usize },
    Apex { d: usize },
}

/// A blown-up vertex of the gadget.
#[derive(Clone, Debug)]
pub struct Block {
    pub original: VertexId,
    pub kind: BlockKind,
    pub vertices: Vec<VertexId>,
    /// `labels[j-1]` is the gadget half-edge that now ends on the block as
    /// pendant `j`.
    pub labels: Vec<HalfEdge>,
}

#[derive(Clone, Debug)]
pub struct BlownUp {
    pub graph: Graph,
    pub costs: TurningCostTable,
    /// Gadget edges keep their ids `0..original_edges`.
    pub original_edges: usize,
    pub blocks: Vec<Block>,
}

impl BlownUp {
    /// Drops every edge internal to a block. For a circuit of the blown-up
    /// graph this gives a circuit of the gadget.
    pub fn project_circuit(&self, c: &EulerianCircuit) -> EulerianCircuit {
        EulerianCircuit::new(
            c.entries().iter().copied().filter(|h| h.edge.0 < self.original_edges).collect(),
        )
    }

    /// For each passage through a block: the block index and the labels of
    /// the pendants used to enter and leave it.
    pub fn block_passages(&self, c: &EulerianCircuit) -> Vec<(usize, usize, usize)> {
        let projected = self.project_circuit(c);
        let entries = projected.entries();
        let n = entries.len();
        let mut out = Vec::new();
        for (b, block) in self.blocks.iter().enumerate() {
            let label = |h: HalfEdge| block.labels.iter().position(|&x| x == h).map(|p| p + 1);
            for t in 0..n {
                let arrive = entries[t].opposite();
                let leave = entries[(t + 1) % n];
                if let (Some(a), Some(l)) = (label(arrive), label(leave)) {
                    out.push((b, a, l));
                }
            }
        }
        out
    }
}

/// Replaces each variable vertex of degree above 8 by its cycle blow-up and
/// the apex, if its degree exceeds 8, by the grid blow-up. Pendant labels
/// follow the rotation at the variable vertex and the half-edge order at
/// the apex.
pub fn blow_up(g: &GadgetGraph) -> Result<BlownUp, BlowupError> {
    let gg = &g.graph;
    for x in &g.variables {
        let degree = gg.degree(x.vertex);
        if degree > 8 && degree.is_multiple_of(4) {
            return Err(BlowupError::DegreeDivisibleBy4 { name: gg.vertex_name(x.vertex).to_string(), degree });
        }
    }
    let rotations = g.rotations();
    let blown: Vec<bool> = gg.vertices().map(|v| gg.degree(v) > 8).collect();
    let mut graph = Graph::new();
    let mut new_id = vec![None; gg.vertex_count()];
    for v in gg.vertices().filter(|v| !blown[v.0]) {
        new_id[v.0] = Some(graph.add_vertex(gg.vertex_name(v)));
    }
    // where each gadget half-edge lands: a kept vertex or a block vertex
    let mut landing: Vec<Option<VertexId>> = vec![None; 2 * gg.edge_count()];
    let slot = |h: HalfEdge| 2 * h.edge.0 + h.end as usize;
    struct Pending {
        block: Block,
        /// variable blocks: cycle vertices; apex blocks: grid layers
        cycle: Vec<VertexId>,
        layers: Vec<Vec<VertexId>>,
    }
    let mut pending = Vec::new();
    for v in gg.vertices().filter(|v| blown[v.0]) {
        let name = gg.vertex_name(v);
        let degree = gg.degree(v);
        if v == g.apex {
            let d = degree / 2;
            let layers = add_grid_vertices(&mut graph, d, &format!("{name}_"));
            let labels = gg.incident(v).to_vec();
            for (j, &h) in labels.iter().enumerate() {
                landing[slot(h)] = Some(layers[0][j]);
            }
            let vertices = layers.iter().flatten().copied().collect();
            pending.push(Pending {
                block: Block { original: v, kind: BlockKind::Apex { d }, vertices, labels },
                cycle: Vec::new(),
                layers,
            });
        } else {
            let k = (degree - 2) / 4;
            let cycle: Vec<VertexId> = (0..2 * k + 1).map(|t| graph.add_vertex(format!("{name}_c{t}"))).collect();
            let labels = rotations[v.0].clone();
            for (j, &h) in labels.iter().enumerate() {
                landing[slot(h)] = Some(cycle[variable_label_slot(k, j + 1).0]);
            }
            pending.push(Pending {
                block: Block { original: v, kind: BlockKind::Variable { k }, vertices: cycle.clone(), labels },
                cycle,
                layers: Vec::new(),
            });
        }
    }
    for e in gg.edge_ids() {
        let ends = [0, 1].map(|end| {
            let h = HalfEdge::new(e, end);
            landing[slot(h)].unwrap_or_else(|| new_id[gg.vertex_of(h).0].unwrap())
        });
        graph.add_edge(gg.edge_name(e), ends[0], ends[1]);
    }
    let mut costs = TurningCostTable::new();
    for (&(a, b), entry) in g.costs.iter() {
        if let Some(v) = new_id[gg.vertex_of(a).0] {
            costs.set(&graph, v, a, b, entry.clone()).expect("kept vertex keeps its half-edges");
        }
    }
    let mut blocks = Vec::new();
    for p in pending {
        let name = gg.vertex_name(p.block.original).to_string();
        match p.block.kind {
            BlockKind::Variable { k } => {
                let copies = add_cycle_copies(&mut graph, &p.cycle, &format!("{name}_"));
                let n = 2 * k + 1;
                let mut outer = vec![p.block.labels[0]; n];
                let mut inner = outer.clone();
                for (j, &h) in p.block.labels.iter().enumerate() {
                    let (t, out) = variable_label_slot(k, j + 1);
                    if out {
                        outer[t] = h;
                    } else {
                        inner[t] = h;
                    }
                }
                for r in cycle_rotation(&copies, &outer, &inner) {
                    charge_non_consecutive(&graph, &r, &mut costs);
                }
            }
            BlockKind::Apex { .. } => {
                add_grid_edges(&mut graph, p.layers, &format!("{name}_"));
            }
        }
        blocks.push(p.block);
    }
    Ok(BlownUp { graph, costs, original_edges: gg.edge_count(), blocks })
}
