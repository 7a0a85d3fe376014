//! Optimal non-crossing circuits of 4-regular plane graphs.
//!
//! Faces are 2-colored with the outer face white. At each vertex the two
//! non-crossing transitions are the white smoothing (pairs around the white
//! corners) and the black smoothing. Joining the two black faces at every
//! vertex gives the Tait graph; a set of white-smoothed vertices yields a
//! single circuit exactly when its Tait edges form a spanning tree, so a
//! minimum spanning tree under weight `a_v - b_v` gives the optimum.

use std::collections::VecDeque;

use thiserror::Error;

use crate::exact::{Method, SolveResult};
use crate::model::{
    circuit_cost, EulerianCircuit, Graph, HalfEdge, Rational, TransitionSystem,
    TurningCostTable, VertexId,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PlanarError {
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("outer face {outer} does not exist ({faces} faces)")]
    BadOuterFace { outer: usize, faces: usize },
    #[error("faces cannot be 2-colored")]
    NotFaceTwoColorable,
    #[error("vertex {0} does not have degree 4")]
    NotFourRegular(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("{0} smoothing assignments exceed the enumeration limit")]
    TooLarge(usize),
}

fn slot(h: HalfEdge) -> usize {
    2 * h.edge.0 + h.end as usize
}

/// A graph with a cyclic order of half-edges at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    graph: Graph,
    rotation: Vec<Vec<HalfEdge>>,
    /// Position of each half-edge in its vertex's rotation.
    position: Vec<usize>,
    outer: usize,
}

impl PlaneGraph {
    pub fn new(graph: Graph, rotation: Vec<Vec<HalfEdge>>, outer: usize) -> Result<Self, PlanarError> {
        if rotation.len() != graph.vertex_count() {
            return Err(PlanarError::InvalidRotation(format!(
                "{} rotations for {} vertices",
                rotation.len(),
                graph.vertex_count()
            )));
        }
        let mut position = vec![usize::MAX; 2 * graph.edge_count()];
        for (v, order) in rotation.iter().enumerate() {
            let name = graph.vertex_name(VertexId(v));
            for (i, &h) in order.iter().enumerate() {
                if !graph.contains_half_edge(h) || graph.vertex_of(h) != VertexId(v) {
                    return Err(PlanarError::InvalidRotation(format!(
                        "rotation at {name} lists a half-edge of another vertex"
                    )));
                }
                if position[slot(h)] != usize::MAX {
                    return Err(PlanarError::InvalidRotation(format!(
                        "rotation at {name} repeats a half-edge"
                    )));
                }
                position[slot(h)] = i;
            }
            if order.len() != graph.degree(VertexId(v)) {
                return Err(PlanarError::InvalidRotation(format!(
                    "rotation at {name} omits incident half-edges"
                )));
            }
        }
        Ok(PlaneGraph { graph, rotation, position, outer })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: VertexId) -> &[HalfEdge] {
        &self.rotation[v.0]
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    /// Next half-edge after `h` in the rotation at its vertex.
    pub fn rotation_successor(&self, h: HalfEdge) -> HalfEdge {
        let order = &self.rotation[self.graph.vertex_of(h).0];
        order[(self.position[slot(h)] + 1) % order.len()]
    }

    /// Whether `a` and `b` are cyclically consecutive at their vertex.
    pub fn consecutive(&self, a: HalfEdge, b: HalfEdge) -> bool {
        let v = self.graph.vertex_of(a);
        if v != self.graph.vertex_of(b) {
            return false;
        }
        let d = self.rotation[v.0].len();
        let (i, j) = (self.position[slot(a)], self.position[slot(b)]);
        (i + 1) % d == j || (j + 1) % d == i
    }

    /// True when every pairing of `c` is between consecutive half-edges.
    pub fn is_non_crossing(&self, c: &EulerianCircuit) -> bool {
        c.pairings().all(|(a, b)| self.consecutive(a, b))
    }

    fn check_four_regular(&self) -> Result<(), PlanarError> {
        match self.graph.vertices().find(|&v| self.graph.degree(v) != 4) {
            Some(v) => Err(PlanarError::NotFourRegular(self.graph.vertex_name(v).to_string())),
            None => Ok(()),
        }
    }
}

/// Faces of a plane graph. A face is the cyclic list of darts (half-edges
/// read as "leave this vertex along this edge") on its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faces {
    pub faces: Vec<Vec<HalfEdge>>,
    face_of: Vec<usize>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face_of(&self, dart: HalfEdge) -> usize {
        self.face_of[slot(dart)]
    }

    /// Face containing the corner between `h` and its rotation successor.
    pub fn corner_face(&self, p: &PlaneGraph, h: HalfEdge) -> usize {
        self.face_of(p.rotation_successor(h))
    }
}

/// Traces faces with `next(h) = successor(opposite(h))`, numbering them in
/// order of their smallest dart. Rejects rotation systems that are not
/// spherical (V - E + F != 2 per component is reported as invalid).
pub fn trace_faces(p: &PlaneGraph) -> Result<Faces, PlanarError> {
    let g = &p.graph;
    let mut face_of = vec![usize::MAX; 2 * g.edge_count()];
    let mut faces = Vec::new();
    for start in g.half_edges() {
        if face_of[slot(start)] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut boundary = Vec::new();
        let mut h = start;
        loop {
            face_of[slot(h)] = id;
            boundary.push(h);
            h = p.rotation_successor(h.opposite());
            if h == start {
                break;
            }
        }
        faces.push(boundary);
    }
    let v = g.vertices().filter(|&v| g.degree(v) > 0).count() as i64;
    let e = g.edge_count() as i64;
    let f = faces.len() as i64;
    if g.edge_count() > 0 && g.is_connected() && v - e + f != 2 {
        return Err(PlanarError::InvalidRotation(format!("V - E + F = {} instead of 2", v - e + f)));
    }
    Ok(Faces { faces, face_of })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    White,
    Black,
}

/// Proper 2-coloring of the faces with the declared outer face white.
pub fn face_two_color(p: &PlaneGraph, faces: &Faces) -> Result<Vec<Color>, PlanarError> {
    let g = &p.graph;
    if g.vertices().any(|v| g.degree(v) % 2 == 1) {
        return Err(PlanarError::NotFaceTwoColorable);
    }
    if p.outer >= faces.len() {
        return Err(PlanarError::BadOuterFace { outer: p.outer, faces: faces.len() });
    }
    if !g.is_connected() {
        return Err(PlanarError::NotConnected);
    }
    let mut color: Vec<Option<Color>> = vec![None; faces.len()];
    color[p.outer] = Some(Color::White);
    let mut queue = VecDeque::from([p.outer]);
    while let Some(f) = queue.pop_front() {
        let here = color[f].unwrap();
        let other = if here == Color::White { Color::Black } else { Color::White };
        for &dart in &faces.faces[f] {
            let across = faces.face_of(dart.opposite());
            match color[across] {
                None => {
                    color[across] = Some(other);
                    queue.push_back(across);
                }
                Some(c) if c == other => {}
                Some(_) => return Err(PlanarError::NotFaceTwoColorable),
            }
        }
    }
    Ok(color.into_iter().map(|c| c.expect("connected graph reaches every face")).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothing {
    White,
    Black,
}

type Transition = [(HalfEdge, HalfEdge); 2];

/// Tait graph together with the per-vertex smoothing data.
#[derive(Clone, Debug)]
pub struct TaitGraph {
    /// Vertices are black faces; edge `i` is `e_v` for plane vertex `i`.
    pub graph: Graph,
    /// Plane face index of each Tait vertex.
    pub face: Vec<usize>,
    pub white: Vec<Transition>,
    pub black: Vec<Transition>,
    /// `a_v`, the cost of the white smoothing.
    pub white_cost: Vec<Rational>,
    /// `b_v`, the cost of the black smoothing.
    pub black_cost: Vec<Rational>,
}

impl TaitGraph {
    /// `a_v - b_v`.
    pub fn weight(&self, v: usize) -> Rational {
        &self.white_cost[v] - &self.black_cost[v]
    }

    pub fn transition(&self, v: usize, s: Smoothing) -> Transition {
        match s {
            Smoothing::White => self.white[v],
            Smoothing::Black => self.black[v],
        }
    }
}

pub fn tait_graph(
    p: &PlaneGraph,
    w: &TurningCostTable,
    faces: &Faces,
    coloring: &[Color],
) -> Result<TaitGraph, PlanarError> {
    p.check_four_regular()?;
    let mut graph = Graph::new();
    let mut tait_vertex = vec![usize::MAX; faces.len()];
    let mut face = Vec::new();
    for (f, &c) in coloring.iter().enumerate() {
        if c == Color::Black {
            tait_vertex[f] = face.len();
            graph.add_vertex(format!("f{f}"));
            face.push(f);
        }
    }
    let big_m = w.big_m();
    let cost = |t: &Transition| -> Rational { t.iter().map(|&(a, b)| w.cost_with(a, b, &big_m)).sum() };
    let (mut white, mut black, mut white_cost, mut black_cost) = (vec![], vec![], vec![], vec![]);
    for v in p.graph.vertices() {
        let r = p.rotation(v);
        let corner = |i: usize| faces.corner_face(p, r[i]);
        let around_01 = [(r[0], r[1]), (r[2], r[3])];
        let around_12 = [(r[1], r[2]), (r[3], r[0])];
        let (wt, bt, black_corners) = if coloring[corner(0)] == Color::White {
            (around_01, around_12, [corner(1), corner(3)])
        } else {
            (around_12, around_01, [corner(0), corner(2)])
        };
        let [f1, f2] = black_corners.map(|f| VertexId(tait_vertex[f]));
        graph.add_edge(p.graph.vertex_name(v), f1, f2);
        white_cost.push(cost(&wt));
        black_cost.push(cost(&bt));
        white.push(wt);
        black.push(bt);
    }
    Ok(TaitGraph { graph, face, white, black, white_cost, black_cost })
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            x = std::mem::replace(&mut self.parent[x], root);
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.parent[a.max(b)] = a.min(b);
        true
    }
}

/// Kruskal over the Tait graph; ties go to the smaller edge id. Returns the
/// tree membership of every edge, or `None` if the graph is disconnected.
pub fn minimum_spanning_tree(t: &TaitGraph) -> Option<Vec<bool>> {
    let m = t.graph.edge_count();
    let mut order: Vec<(Rational, usize)> = (0..m).map(|e| (t.weight(e), e)).collect();
    order.sort();
    let mut dsu = Dsu::new(t.graph.vertex_count());
    let mut in_tree = vec![false; m];
    let mut joined = 0;
    for (_, e) in order {
        let [a, b] = t.graph.edge(crate::model::EdgeId(e)).ends;
        if dsu.union(a.0, b.0) {
            in_tree[e] = true;
            joined += 1;
        }
    }
    (joined + 1 == t.graph.vertex_count()).then_some(in_tree)
}

/// Closed trails produced by applying `choice[v]` at every vertex.
pub fn smoothing_to_circuit(
    p: &PlaneGraph,
    tait: &TaitGraph,
    choice: &[Smoothing],
) -> Result<Vec<EulerianCircuit>, PlanarError> {
    p.check_four_regular()?;
    let pairs = p.graph.vertices().flat_map(|v| tait.transition(v.0, choice[v.0]));
    let ts = TransitionSystem::from_pairs(&p.graph, pairs).expect("smoothings are perfect matchings");
    Ok(ts.trails(&p.graph))
}

/// Everything the fast path derives from a plane graph.
pub struct PlanarStructure {
    pub faces: Faces,
    pub coloring: Vec<Color>,
    pub tait: TaitGraph,
}

pub fn planar_structure(p: &PlaneGraph, w: &TurningCostTable) -> Result<PlanarStructure, PlanarError> {
    p.check_four_regular()?;
    if !p.graph.is_connected() {
        return Err(PlanarError::NotConnected);
    }
    let faces = trace_faces(p)?;
    let coloring = face_two_color(p, &faces)?;
    let tait = tait_graph(p, w, &faces, &coloring)?;
    Ok(PlanarStructure { faces, coloring, tait })
}

/// Minimum-cost non-crossing Eulerian circuit, with crossing transitions
/// excluded regardless of what the table says about them.
pub fn min_cost_atrail(p: &PlaneGraph, w: &TurningCostTable) -> Result<SolveResult, PlanarError> {
    let s = planar_structure(p, w)?;
    let tree = minimum_spanning_tree(&s.tait).ok_or(PlanarError::NotConnected)?;
    let choice: Vec<Smoothing> =
        tree.iter().map(|&t| if t { Smoothing::White } else { Smoothing::Black }).collect();
    let mut trails = smoothing_to_circuit(p, &s.tait, &choice)?;
    assert_eq!(trails.len(), 1, "a spanning tree of the Tait graph gives one circuit");
    let circuit = trails.pop().unwrap().canonical();
    let tree_weight: Rational = (0..tree.len()).filter(|&v| tree[v]).map(|v| s.tait.weight(v)).sum();
    let base: Rational = s.tait.black_cost.iter().cloned().sum();
    let cost = tree_weight + base;
    debug_assert_eq!(circuit_cost(&p.graph, w, &circuit).ok(), Some(cost.clone()));
    Ok(SolveResult { cost, circuit, method: Method::PlanarAtrail })
}

/// Largest vertex count [`exhaustive_min_atrail`] will enumerate.
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 20;

/// Brute-force optimum over all `2^n` smoothing assignments that give a
/// single circuit. Ties keep the smallest canonical circuit.
pub fn exhaustive_min_atrail(
    p: &PlaneGraph,
    w: &TurningCostTable,
) -> Result<Option<(Rational, EulerianCircuit)>, PlanarError> {
    let n = p.graph.vertex_count();
    if n > EXHAUSTIVE_VERTEX_LIMIT {
        return Err(PlanarError::TooLarge(n));
    }
    let s = planar_structure(p, w)?;
    let mut best: Option<(Rational, EulerianCircuit)> = None;
    for bits in 0u32..1 << n {
        let choice: Vec<Smoothing> = (0..n)
            .map(|v| if bits >> v & 1 == 1 { Smoothing::White } else { Smoothing::Black })
            .collect();
        let mut trails = smoothing_to_circuit(p, &s.tait, &choice)?;
        if trails.len() != 1 {
            continue;
        }
        let c = trails.pop().unwrap().canonical();
        let cost = circuit_cost(&p.graph, w, &c).expect("trail of a transition system");
        let candidate = (cost, c);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    Ok(best)
}

/// The two pairings at `v` that are not rotation-consecutive.
pub fn crossing_pairs(p: &PlaneGraph, v: VertexId) -> Vec<(HalfEdge, HalfEdge)> {
    let r = p.rotation(v);
    if r.len() != 4 {
        return Vec::new();
    }
    vec![(r[0], r[2]), (r[1], r[3])]
}

/// Whether the table forbids every crossing transition.
pub fn crossings_forbidden(p: &PlaneGraph, w: &TurningCostTable) -> bool {
    p.graph
        .vertices()
        .all(|v| crossing_pairs(p, v).iter().any(|&(a, b)| w.is_forbidden(a, b)))
}
