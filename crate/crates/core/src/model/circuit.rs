//! Eulerian circuits, transition systems, and cost evaluation.

use thiserror::Error;

use super::costs::{pair_key, TurningCostTable};
use super::graph::{EdgeId, Graph, HalfEdge, VertexId};
use super::rational::Rational;

/// Cyclic sequence of the half-edges by which each edge is entered.
///
/// Entering edge `e` through `e.k` means the traversal leaves through
/// `e.(1-k)`; the next entry must sit at that same vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EulerianCircuit {
    entries: Vec<HalfEdge>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("position {position}: half-edge refers to an unknown edge")]
    UnknownEdge { position: usize },
    #[error("position {position}: edge {edge} is traversed twice")]
    DuplicateEdge { edge: EdgeId, position: usize },
    #[error("edge {0} is never traversed")]
    MissingEdge(EdgeId),
    #[error("position {position}: the next edge does not start where this one ends")]
    BrokenAdjacency { position: usize },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TransitionError {
    #[error("half-edge {0:?} is paired more than once or at the wrong vertex")]
    BadPairing(HalfEdge),
    #[error("half-edge {0:?} is left unpaired")]
    Unpaired(HalfEdge),
}

impl EulerianCircuit {
    pub fn new(entries: Vec<HalfEdge>) -> Self {
        EulerianCircuit { entries }
    }

    pub fn entries(&self) -> &[HalfEdge] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Edge order of the reverse traversal.
    pub fn reversed(&self) -> Self {
        EulerianCircuit {
            entries: self.entries.iter().rev().map(|h| h.opposite()).collect(),
        }
    }

    /// Rotation starting at the smallest edge id. Of the two directions the
    /// one with the lexicographically smaller edge-id sequence wins; ties
    /// (digons, single loops) fall back to comparing entry ends.
    pub fn canonical(&self) -> Self {
        if self.entries.is_empty() {
            return self.clone();
        }
        let rotate = |seq: &[HalfEdge]| -> Vec<HalfEdge> {
            let start = (0..seq.len()).min_by_key(|&i| seq[i].edge).unwrap();
            seq[start..].iter().chain(&seq[..start]).copied().collect()
        };
        let forward = rotate(&self.entries);
        let backward = rotate(&self.reversed().entries);
        let edge_order = |seq: &[HalfEdge]| seq.iter().map(|h| h.edge).collect::<Vec<_>>();
        let pick_forward = match edge_order(&forward).cmp(&edge_order(&backward)) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => forward <= backward,
        };
        EulerianCircuit { entries: if pick_forward { forward } else { backward } }
    }

    /// Pairings `(exit of entry i, entry i+1)`, cyclically.
    pub fn pairings(&self) -> impl Iterator<Item = (HalfEdge, HalfEdge)> + '_ {
        let n = self.entries.len();
        (0..n).map(move |i| (self.entries[i].opposite(), self.entries[(i + 1) % n]))
    }
}

pub fn validate_circuit(g: &Graph, c: &EulerianCircuit) -> Result<(), CircuitError> {
    let mut seen = vec![false; g.edge_count()];
    for (position, h) in c.entries.iter().enumerate() {
        if !g.contains_half_edge(*h) {
            return Err(CircuitError::UnknownEdge { position });
        }
        if std::mem::replace(&mut seen[h.edge.0], true) {
            return Err(CircuitError::DuplicateEdge { edge: h.edge, position });
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(CircuitError::MissingEdge(EdgeId(missing)));
    }
    for (position, (exit, next)) in c.pairings().enumerate() {
        if g.vertex_of(exit) != g.vertex_of(next) {
            return Err(CircuitError::BrokenAdjacency { position });
        }
    }
    Ok(())
}

pub fn circuit_cost(
    g: &Graph,
    w: &TurningCostTable,
    c: &EulerianCircuit,
) -> Result<Rational, CircuitError> {
    validate_circuit(g, c)?;
    let big_m = w.big_m();
    Ok(c.pairings().map(|(a, b)| w.cost_with(a, b, &big_m)).sum())
}

/// A perfect matching of the half-edges at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    partner: Vec<HalfEdge>,
}

fn slot(h: HalfEdge) -> usize {
    2 * h.edge.0 + h.end as usize
}

impl TransitionSystem {
    /// Builds a transition system from a full list of pairings.
    pub fn from_pairs(
        g: &Graph,
        pairs: impl IntoIterator<Item = (HalfEdge, HalfEdge)>,
    ) -> Result<Self, TransitionError> {
        const UNSET: HalfEdge = HalfEdge { edge: EdgeId(usize::MAX), end: 0 };
        let mut partner = vec![UNSET; 2 * g.edge_count()];
        for (a, b) in pairs {
            for h in [a, b] {
                if !g.contains_half_edge(h) || partner[slot(h)] != UNSET {
                    return Err(TransitionError::BadPairing(h));
                }
            }
            if a == b || g.vertex_of(a) != g.vertex_of(b) {
                return Err(TransitionError::BadPairing(a));
            }
            partner[slot(a)] = b;
            partner[slot(b)] = a;
        }
        if let Some(h) = g.half_edges().find(|&h| partner[slot(h)] == UNSET) {
            return Err(TransitionError::Unpaired(h));
        }
        Ok(TransitionSystem { partner })
    }

    pub fn partner(&self, h: HalfEdge) -> HalfEdge {
        self.partner[slot(h)]
    }

    /// Pairings at `v`, each as `(smaller, larger)`, sorted.
    pub fn pairs_at(&self, g: &Graph, v: VertexId) -> Vec<(HalfEdge, HalfEdge)> {
        let mut out: Vec<_> = g
            .incident(v)
            .iter()
            .map(|&h| pair_key(h, self.partner(h)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn cost_at(&self, g: &Graph, w: &TurningCostTable, v: VertexId) -> Rational {
        let big_m = w.big_m();
        self.pairs_at(g, v).into_iter().map(|(a, b)| w.cost_with(a, b, &big_m)).sum()
    }

    pub fn cost(&self, g: &Graph, w: &TurningCostTable) -> Rational {
        g.vertices().map(|v| self.cost_at(g, w, v)).sum()
    }

    /// Decomposes the edges into the closed trails this system determines.
    ///
    /// Each trail starts at its smallest unused edge entered through end 0.
    pub fn trails(&self, g: &Graph) -> Vec<EulerianCircuit> {
        let mut used = vec![false; g.edge_count()];
        let mut out = Vec::new();
        for e in g.edge_ids() {
            if used[e.0] {
                continue;
            }
            let start = HalfEdge::new(e, 0);
            let mut entries = Vec::new();
            let mut h = start;
            loop {
                used[h.edge.0] = true;
                entries.push(h);
                h = self.partner(h.opposite());
                if h == start {
                    break;
                }
            }
            out.push(EulerianCircuit::new(entries));
        }
        out
    }

    /// The single circuit when the system yields exactly one closed trail.
    pub fn single_circuit(&self, g: &Graph) -> Option<EulerianCircuit> {
        let mut trails = self.trails(g);
        (trails.len() == 1).then(|| trails.pop().unwrap())
    }
}

/// Transition system induced by a circuit: consecutive half-edges are paired.
pub fn transitions_of(g: &Graph, c: &EulerianCircuit) -> Result<TransitionSystem, CircuitError> {
    validate_circuit(g, c)?;
    Ok(TransitionSystem::from_pairs(g, c.pairings())
        .expect("a valid circuit pairs every half-edge exactly once"))
}
