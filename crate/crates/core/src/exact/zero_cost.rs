//! Complete search for an Eulerian circuit that only uses free pairings.
//!
//! Vertices where every pairing is free ("hubs") never need branching: once
//! the other vertices have fixed their transitions, the edges split into
//! segments running between hub half-edges, and because any pairing at a
//! hub is allowed, the segments close into one circuit exactly when they
//! cover every edge and connect all hubs. The search therefore enumerates
//! free perfect matchings only at the remaining vertices, pruning any
//! choice that closes a trail short of the full edge set.

use thiserror::Error;

use crate::model::{EulerianCircuit, Graph, HalfEdge, TransitionSystem, TurningCostTable, VertexId};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ZeroCostError {
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("search exceeded its node budget of {0}")]
    BudgetExceeded(u64),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroCostOptions {
    /// Abort with [`ZeroCostError::BudgetExceeded`] after this many
    /// tentative pairings. `None` searches to completion.
    pub max_nodes: Option<u64>,
}

const UNSET: usize = usize::MAX;

fn slot(h: HalfEdge) -> usize {
    2 * h.edge.0 + h.end as usize
}

struct Search<'a> {
    g: &'a Graph,
    free: Vec<Vec<HalfEdge>>,
    hub: Vec<bool>,
    order: Vec<VertexId>,
    /// Partner slot of every half-edge at a fixed non-hub vertex.
    partner: Vec<usize>,
    nodes: u64,
    max_nodes: Option<u64>,
}

fn half(s: usize) -> HalfEdge {
    HalfEdge::new(crate::model::EdgeId(s / 2), (s % 2) as u8)
}

impl Search<'_> {
    /// Follows fixed transitions forward from leaving along `h`. Returns the
    /// number of edges walked if the walk closes back on `h`.
    fn closes(&self, h: HalfEdge) -> Option<usize> {
        let mut cur = h;
        let mut len = 0;
        loop {
            len += 1;
            let arrive = slot(cur.opposite());
            let next = self.partner[arrive];
            if next == UNSET {
                return None;
            }
            cur = half(next);
            if cur == h {
                return Some(len);
            }
        }
    }

    /// Pairs up the half-edges still open at the current vertex, depth-first.
    fn match_vertex(&mut self, depth: usize, open: &mut Vec<HalfEdge>) -> Result<bool, ZeroCostError> {
        let Some(&a) = open.first() else {
            return self.descend(depth + 1);
        };
        let candidates: Vec<HalfEdge> =
            self.free[slot(a)].iter().copied().filter(|b| open.contains(b)).collect();
        for b in candidates {
            self.nodes += 1;
            if let Some(limit) = self.max_nodes {
                if self.nodes > limit {
                    return Err(ZeroCostError::BudgetExceeded(limit));
                }
            }
            self.partner[slot(a)] = slot(b);
            self.partner[slot(b)] = slot(a);
            let m = self.g.edge_count();
            let premature = [a, b].iter().any(|&h| self.closes(h).is_some_and(|len| len < m));
            if !premature {
                let saved = open.clone();
                open.retain(|&h| h != a && h != b);
                if self.match_vertex(depth, open)? {
                    return Ok(true);
                }
                *open = saved;
            }
            self.partner[slot(a)] = UNSET;
            self.partner[slot(b)] = UNSET;
        }
        Ok(false)
    }

    fn descend(&mut self, depth: usize) -> Result<bool, ZeroCostError> {
        if depth == self.order.len() {
            return Ok(self.hubs_close_up());
        }
        let v = self.order[depth];
        let mut open = self.g.incident(v).to_vec();
        self.match_vertex(depth, &mut open)
    }

    /// Segments between hub half-edges, each as (start, end) where `start`
    /// leaves a hub and `end` arrives at a hub.
    fn segments(&self) -> Option<Vec<(HalfEdge, HalfEdge)>> {
        let g = self.g;
        let mut covered = 0;
        let mut out = Vec::new();
        for v in g.vertices().filter(|v| self.hub[v.0]) {
            for &start in g.incident(v) {
                let mut cur = start;
                loop {
                    covered += 1;
                    let arrive = cur.opposite();
                    if self.hub[g.vertex_of(arrive).0] {
                        out.push((start, arrive));
                        break;
                    }
                    cur = half(self.partner[slot(arrive)]);
                }
            }
        }
        // every segment was walked from both ends
        (covered == 2 * g.edge_count()).then_some(out)
    }

    fn hubs_close_up(&self) -> bool {
        let g = self.g;
        if !self.hub.iter().any(|&h| h) {
            return self.closes(HalfEdge::new(crate::model::EdgeId(0), 0)) == Some(g.edge_count());
        }
        let Some(segments) = self.segments() else {
            return false;
        };
        let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(s, e) in &segments {
            let (a, b) = (find(&mut parent, g.vertex_of(s).0), find(&mut parent, g.vertex_of(e).0));
            parent[a.max(b)] = a.min(b);
        }
        let hubs: Vec<usize> = g.vertices().filter(|v| self.hub[v.0] && g.degree(*v) > 0).map(|v| v.0).collect();
        let root = find(&mut parent, hubs[0]);
        hubs.iter().all(|&h| find(&mut parent, h) == root)
    }

    /// Completes the hub transitions along an Euler tour of the segments.
    fn finish(&self) -> EulerianCircuit {
        let g = self.g;
        let mut pairs: Vec<(HalfEdge, HalfEdge)> = Vec::new();
        for s in 0..self.partner.len() {
            if self.partner[s] != UNSET && s < self.partner[s] {
                pairs.push((half(s), half(self.partner[s])));
            }
        }
        if self.hub.iter().any(|&h| h) {
            let segments = self.segments().expect("checked at the leaf");
            // each undirected segment appears twice; keep one orientation
            let mut unique: Vec<(HalfEdge, HalfEdge)> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for (s, e) in segments {
                if seen.insert(slot(e)) {
                    seen.insert(slot(s));
                    unique.push((s, e));
                }
            }
            // Hierholzer over segments; at a hub, ends of incident segments are its half-edges
            let mut at: Vec<Vec<(usize, bool)>> = vec![Vec::new(); g.vertex_count()];
            for (i, &(s, e)) in unique.iter().enumerate() {
                at[g.vertex_of(s).0].push((i, true));
                at[g.vertex_of(e).0].push((i, false));
            }
            let mut used = vec![false; unique.len()];
            let mut cursor = vec![0usize; g.vertex_count()];
            let start = g.vertex_of(unique[0].0);
            // stack holds (vertex, segment taken to reach it, direction)
            let mut stack: Vec<(VertexId, Option<(usize, bool)>)> = vec![(start, None)];
            let mut tour: Vec<(usize, bool)> = Vec::new();
            while let Some(&(v, via)) = stack.last() {
                let list = &at[v.0];
                while cursor[v.0] < list.len() && used[list[cursor[v.0]].0] {
                    cursor[v.0] += 1;
                }
                if cursor[v.0] == list.len() {
                    stack.pop();
                    if let Some(step) = via {
                        tour.push(step);
                    }
                    continue;
                }
                let (i, forward) = list[cursor[v.0]];
                used[i] = true;
                let (s, e) = unique[i];
                let to = if forward { g.vertex_of(e) } else { g.vertex_of(s) };
                stack.push((to, Some((i, forward))));
            }
            tour.reverse();
            let oriented: Vec<(HalfEdge, HalfEdge)> = tour
                .iter()
                .map(|&(i, forward)| {
                    let (s, e) = unique[i];
                    if forward {
                        (s, e)
                    } else {
                        (e, s)
                    }
                })
                .collect();
            for k in 0..oriented.len() {
                let arrive = oriented[k].1;
                let leave = oriented[(k + 1) % oriented.len()].0;
                pairs.push((arrive, leave));
            }
        }
        let ts = TransitionSystem::from_pairs(g, pairs).expect("search fixed a perfect matching everywhere");
        ts.single_circuit(g).expect("leaf check guarantees a single circuit").canonical()
    }
}

/// Searches for an Eulerian circuit whose every pairing has cost exactly 0.
/// The result, if any, is in canonical form.
pub fn zero_cost_circuit(
    g: &Graph,
    w: &TurningCostTable,
    options: ZeroCostOptions,
) -> Result<Option<EulerianCircuit>, ZeroCostError> {
    if !g.is_eulerian() {
        return Err(ZeroCostError::NotEulerian);
    }
    if g.edge_count() == 0 {
        return Ok(Some(EulerianCircuit::new(Vec::new())));
    }
    let mut free = vec![Vec::new(); 2 * g.edge_count()];
    let mut hub = vec![false; g.vertex_count()];
    for v in g.vertices() {
        let inc = g.incident(v);
        let mut all = true;
        for &a in inc {
            for &b in inc {
                if a != b {
                    if w.is_free(a, b) {
                        free[slot(a)].push(b);
                    } else {
                        all = false;
                    }
                }
            }
        }
        hub[v.0] = all && !inc.is_empty();
    }
    // Breadth-first order keeps neighbouring decisions close together so
    // short closed trails are caught early.
    let mut order = Vec::new();
    let mut seen = vec![false; g.vertex_count()];
    let first = g.vertex_of(HalfEdge::new(crate::model::EdgeId(0), 0));
    let mut queue = std::collections::VecDeque::from([first]);
    seen[first.0] = true;
    while let Some(v) = queue.pop_front() {
        if !hub[v.0] {
            order.push(v);
        }
        for &h in g.incident(v) {
            let x = g.vertex_of(h.opposite());
            if !seen[x.0] {
                seen[x.0] = true;
                queue.push_back(x);
            }
        }
    }
    let mut search = Search {
        g,
        free,
        hub,
        order,
        partner: vec![UNSET; 2 * g.edge_count()],
        nodes: 0,
        max_nodes: options.max_nodes,
    };
    if search.descend(0)? {
        Ok(Some(search.finish()))
    } else {
        Ok(None)
    }
}
