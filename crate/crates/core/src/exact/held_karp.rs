//! Subset dynamic program for exact minimum-weight Hamiltonian cycles.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::model::Rational;

pub const DEFAULT_BITMASK_LIMIT: usize = 24;
/// Hard ceiling imposed by the `u64` subset masks.
pub const MAX_BITMASK_LIMIT: usize = 63;

/// Simple undirected graph with exact rational edge weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedGraph {
    names: Vec<String>,
    adjacency: Vec<Vec<(usize, Rational)>>,
    arc_count: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WeightedGraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("nodes {0} and {1} are already joined")]
    ParallelArc(usize, usize),
    #[error("node {0} does not exist")]
    UnknownNode(usize),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HeldKarpError {
    #[error("{nodes} nodes exceed the bitmask limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("a Hamiltonian cycle needs at least 3 nodes, got {0}")]
    TooSmall(usize),
    #[error("start node {0} does not exist")]
    BadStart(usize),
    #[error("scaled weights overflow 128-bit integers")]
    Overflow,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.adjacency.push(Vec::new());
        self.names.len() - 1
    }

    pub fn add_arc(&mut self, a: usize, b: usize, weight: Rational) -> Result<(), WeightedGraphError> {
        let n = self.node_count();
        for x in [a, b] {
            if x >= n {
                return Err(WeightedGraphError::UnknownNode(x));
            }
        }
        if a == b {
            return Err(WeightedGraphError::SelfLoop(a));
        }
        if self.weight(a, b).is_some() {
            return Err(WeightedGraphError::ParallelArc(a.min(b), a.max(b)));
        }
        self.adjacency[a].push((b, weight.clone()));
        self.adjacency[b].push((a, weight));
        self.arc_count += 1;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, Rational)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<&Rational> {
        self.adjacency[a].iter().find(|(x, _)| *x == b).map(|(_, w)| w)
    }

    /// Arcs as `(a, b, weight)` with `a < b`, sorted.
    pub fn arcs(&self) -> Vec<(usize, usize, Rational)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| {
                list.iter().filter(move |(b, _)| a < *b).map(move |(b, w)| (a, *b, w.clone()))
            })
            .collect();
        out.sort_by_key(|x| (x.0, x.1));
        out
    }

    /// Weight of a closed node sequence, or `None` if a step has no arc.
    pub fn cycle_weight(&self, cycle: &[usize]) -> Option<Rational> {
        let n = cycle.len();
        let mut total = Rational::zero();
        for i in 0..n {
            total += self.weight(cycle[i], cycle[(i + 1) % n])?;
        }
        Some(total)
    }
}

/// Least common multiple of the weight denominators.
pub(crate) fn common_scale<'a>(weights: impl Iterator<Item = &'a Rational>) -> BigInt {
    weights.fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
}

/// Exact minimum-weight Hamiltonian cycle.
///
/// States are `(visited set, current node)` pairs reachable from `start`
/// along existing arcs, so sparse inputs only touch the states they can
/// actually reach. Weights are scaled to a common denominator and summed as
/// integers. Ties keep the predecessor with the smaller node index; the
/// returned cycle begins at `start`.
pub fn held_karp(
    t: &WeightedGraph,
    start: usize,
    limit: usize,
) -> Result<Option<(Rational, Vec<usize>)>, HeldKarpError> {
    let n = t.node_count();
    let limit = limit.min(MAX_BITMASK_LIMIT);
    if n > limit {
        return Err(HeldKarpError::TooLarge { nodes: n, limit });
    }
    if n < 3 {
        return Err(HeldKarpError::TooSmall(n));
    }
    if start >= n {
        return Err(HeldKarpError::BadStart(start));
    }
    let scale = common_scale(t.adjacency.iter().flatten().map(|(_, w)| w));
    let mut adj: Vec<Vec<(usize, i128)>> = Vec::with_capacity(n);
    for list in &t.adjacency {
        let mut scaled = Vec::with_capacity(list.len());
        for (b, w) in list {
            scaled.push((*b, w.scaled_integer(&scale).ok_or(HeldKarpError::Overflow)?));
        }
        scaled.sort_by_key(|(b, _)| *b);
        adj.push(scaled);
    }
    if adj.iter().any(|l| l.len() < 2) {
        return Ok(None);
    }

    type Layer = HashMap<(u64, usize), (i128, usize)>;
    let mut layers: Vec<Layer> = Vec::with_capacity(n);
    let mut first = Layer::new();
    first.insert((1u64 << start, start), (0, usize::MAX));
    layers.push(first);
    for _ in 1..n {
        let prev = layers.last().unwrap();
        let mut next = Layer::with_capacity(prev.len() * 2);
        for (&(mask, last), &(cost, _)) in prev {
            for &(j, w) in &adj[last] {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let cand = cost.checked_add(w).ok_or(HeldKarpError::Overflow)?;
                let key = (mask | (1 << j), j);
                match next.get_mut(&key) {
                    Some(slot) => {
                        if (cand, last) < *slot {
                            *slot = (cand, last);
                        }
                    }
                    None => {
                        next.insert(key, (cand, last));
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        layers.push(next);
    }

    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best: Option<(i128, usize)> = None;
    for &(j, w) in &adj[start] {
        if let Some(&(cost, _)) = layers[n - 1].get(&(full, j)) {
            let cand = (cost.checked_add(w).ok_or(HeldKarpError::Overflow)?, j);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    let Some((total, mut last)) = best else {
        return Ok(None);
    };
    let mut cycle = Vec::with_capacity(n);
    let mut mask = full;
    for depth in (0..n).rev() {
        cycle.push(last);
        let (_, prev) = layers[depth][&(mask, last)];
        mask &= !(1 << last);
        last = prev;
    }
    cycle.reverse();
    debug_assert_eq!(cycle[0], start);
    Ok(Some((Rational::from_scaled(total, &scale), cycle)))
}
