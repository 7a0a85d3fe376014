//! Turning-cost tables.

use std::collections::BTreeMap;

use thiserror::Error;

use super::graph::{Graph, HalfEdge, VertexId};
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CostEntry {
    Finite(Rational),
    /// Prohibited pairing; evaluates to the table's big-M.
    Forbidden,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CostError {
    #[error("half-edge {0:?} is not attached to vertex {1}")]
    NotAtVertex(HalfEdge, VertexId),
    #[error("a pairing needs two distinct half-edges")]
    Degenerate,
    #[error("turning costs must be non-negative, got {0}")]
    Negative(Rational),
}

/// Unordered pair of distinct half-edges, smaller first.
pub fn pair_key(a: HalfEdge, b: HalfEdge) -> (HalfEdge, HalfEdge) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Sparse map from pairings to costs. Unlisted pairings cost 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TurningCostTable {
    entries: BTreeMap<(HalfEdge, HalfEdge), CostEntry>,
    finite_sum: Rational,
}

impl TurningCostTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(
        &mut self,
        g: &Graph,
        v: VertexId,
        a: HalfEdge,
        b: HalfEdge,
        entry: CostEntry,
    ) -> Result<(), CostError> {
        if a == b {
            return Err(CostError::Degenerate);
        }
        for h in [a, b] {
            if !g.contains_half_edge(h) || g.vertex_of(h) != v {
                return Err(CostError::NotAtVertex(h, v));
            }
        }
        if let CostEntry::Finite(c) = &entry {
            if c.is_negative() {
                return Err(CostError::Negative(c.clone()));
            }
            self.finite_sum += c;
        }
        if let Some(CostEntry::Finite(old)) = self.entries.insert(pair_key(a, b), entry) {
            self.finite_sum -= &old;
        }
        Ok(())
    }

    pub fn set_cost(
        &mut self,
        g: &Graph,
        a: HalfEdge,
        b: HalfEdge,
        cost: Rational,
    ) -> Result<(), CostError> {
        self.set(g, g.vertex_of(a), a, b, CostEntry::Finite(cost))
    }

    pub fn forbid(&mut self, g: &Graph, a: HalfEdge, b: HalfEdge) -> Result<(), CostError> {
        self.set(g, g.vertex_of(a), a, b, CostEntry::Forbidden)
    }

    pub fn entry(&self, a: HalfEdge, b: HalfEdge) -> Option<&CostEntry> {
        self.entries.get(&pair_key(a, b))
    }

    pub fn is_forbidden(&self, a: HalfEdge, b: HalfEdge) -> bool {
        matches!(self.entry(a, b), Some(CostEntry::Forbidden))
    }

    /// `1 + ` the sum of every finite cost in the table.
    pub fn big_m(&self) -> Rational {
        &self.finite_sum + &Rational::one()
    }

    pub fn finite_sum(&self) -> &Rational {
        &self.finite_sum
    }

    /// Resolved cost of a pairing (forbidden pairings evaluate to big-M).
    pub fn cost(&self, a: HalfEdge, b: HalfEdge) -> Rational {
        match self.entry(a, b) {
            None => Rational::zero(),
            Some(CostEntry::Finite(c)) => c.clone(),
            Some(CostEntry::Forbidden) => self.big_m(),
        }
    }

    /// Like [`cost`](Self::cost) with a precomputed big-M.
    pub fn cost_with(&self, a: HalfEdge, b: HalfEdge, big_m: &Rational) -> Rational {
        match self.entry(a, b) {
            None => Rational::zero(),
            Some(CostEntry::Finite(c)) => c.clone(),
            Some(CostEntry::Forbidden) => big_m.clone(),
        }
    }

    /// True iff the pairing is listed with exact cost 0 or not listed.
    pub fn is_free(&self, a: HalfEdge, b: HalfEdge) -> bool {
        match self.entry(a, b) {
            None => true,
            Some(CostEntry::Finite(c)) => c.is_zero(),
            Some(CostEntry::Forbidden) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(HalfEdge, HalfEdge), &CostEntry)> {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::graph::fixtures::digon;
    use crate::model::graph::EdgeId;

    #[test]
    fn symmetric_lookup_and_default_zero() {
        let g = digon();
        let mut w = TurningCostTable::new();
        let a = HalfEdge::new(EdgeId(0), 0);
        let b = HalfEdge::new(EdgeId(1), 0);
        w.set_cost(&g, a, b, Rational::new(1, 2)).unwrap();
        assert_eq!(w.cost(b, a), Rational::new(1, 2));
        assert_eq!(w.cost(a.opposite(), b.opposite()), Rational::zero());
        assert!(w.is_free(a.opposite(), b.opposite()));
    }

    #[test]
    fn rejects_foreign_half_edges() {
        let g = digon();
        let mut w = TurningCostTable::new();
        let a = HalfEdge::new(EdgeId(0), 0);
        let c = HalfEdge::new(EdgeId(1), 1);
        assert!(matches!(
            w.set_cost(&g, a, c, Rational::one()),
            Err(CostError::NotAtVertex(..))
        ));
        assert_eq!(w.set_cost(&g, a, a, Rational::one()), Err(CostError::Degenerate));
        let b = HalfEdge::new(EdgeId(1), 0);
        assert!(matches!(
            w.set_cost(&g, a, b, Rational::from_integer(-1)),
            Err(CostError::Negative(_))
        ));
    }

    #[test]
    fn big_m_tracks_overwrites() {
        let g = digon();
        let mut w = TurningCostTable::new();
        let a = HalfEdge::new(EdgeId(0), 0);
        let b = HalfEdge::new(EdgeId(1), 0);
        w.set_cost(&g, a, b, Rational::from_integer(5)).unwrap();
        w.set_cost(&g, a.opposite(), b.opposite(), Rational::new(1, 3)).unwrap();
        assert_eq!(w.big_m(), Rational::new(19, 3));
        w.forbid(&g, a, b).unwrap();
        assert_eq!(w.big_m(), Rational::new(4, 3));
        assert_eq!(w.cost(a, b), Rational::new(4, 3));
        assert!(!w.is_free(a, b));
    }
}
