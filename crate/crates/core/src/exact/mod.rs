//! Exact solvers for the minimum turning-cost Eulerian circuit.

pub mod held_karp;
pub mod oracle;
pub mod zero_cost;

use std::fmt;

use thiserror::Error;

use crate::model::{circuit_cost, validate_circuit, EulerianCircuit, Graph, Rational, TurningCostTable};
use crate::reduce::{held_karp_contracted, lift_hamiltonian, line_graph_weighted, subdivide_twice, LiftError};

use self::held_karp::{held_karp, HeldKarpError, DEFAULT_BITMASK_LIMIT};
use self::oracle::{oracle_min_circuit, transition_system_count, OracleError, DEFAULT_ENUMERATION_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Tsp,
    TspContracted,
    ZeroCost,
    PlanarAtrail,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Tsp => "tsp",
            Method::TspContracted => "tsp-contracted",
            Method::ZeroCost => "zerocost",
            Method::PlanarAtrail => "atrail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub cost: Rational,
    pub circuit: EulerianCircuit,
    pub method: Method,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("line graph has {nodes} nodes, over the bitmask limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("{combinations} transition systems exceed the enumeration budget of {budget}")]
    InstanceTooLarge { combinations: u128, budget: u128 },
    #[error("scaled weights overflow 128-bit integers")]
    Overflow,
    #[error(transparent)]
    Lift(#[from] LiftError),
}

impl From<HeldKarpError> for SolveError {
    fn from(e: HeldKarpError) -> Self {
        match e {
            HeldKarpError::TooLarge { nodes, limit } => SolveError::TooLarge { nodes, limit },
            HeldKarpError::Overflow => SolveError::Overflow,
            // callers only reach held_karp with >= 3 nodes and start 0
            HeldKarpError::TooSmall(_) | HeldKarpError::BadStart(_) => {
                unreachable!("held_karp called on a degenerate line graph: {e}")
            }
        }
    }
}

impl From<OracleError> for SolveError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::NotEulerian => SolveError::NotEulerian,
            OracleError::InstanceTooLarge { combinations, budget } => {
                SolveError::InstanceTooLarge { combinations, budget }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub bitmask_limit: usize,
    /// Run the subset DP on one node per original edge instead of the full
    /// line graph.
    pub contract_forced: bool,
    pub enumeration_budget: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            bitmask_limit: DEFAULT_BITMASK_LIMIT,
            contract_forced: false,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

/// Optimum through the TSP reduction: subdivide twice, take the weighted
/// line graph, solve it exactly, and lift the tour back.
///
/// The lifted circuit is validated and its cost recomputed from the
/// original table; a mismatch with the tour weight is a bug and panics.
pub fn solve_via_tsp(
    g: &Graph,
    w: &TurningCostTable,
    options: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    if !g.is_eulerian() {
        return Err(SolveError::NotEulerian);
    }
    let method = if options.contract_forced { Method::TspContracted } else { Method::Tsp };
    if g.edge_count() == 0 {
        return Ok(SolveResult { cost: Rational::zero(), circuit: EulerianCircuit::new(Vec::new()), method });
    }
    let s = subdivide_twice(g, w);
    let l = line_graph_weighted(&s);
    let found = if options.contract_forced {
        held_karp_contracted(&l, options.bitmask_limit)?
    } else {
        held_karp(&l.tsp, 0, options.bitmask_limit)?
    };
    let (weight, cycle) = found.expect("the line graph of an Eulerian subdivision is Hamiltonian");
    let circuit = lift_hamiltonian(&l, &cycle)?.canonical();
    validate_circuit(g, &circuit).expect("lifted tour is an Eulerian circuit");
    let cost = circuit_cost(g, w, &circuit).expect("validated circuit");
    assert_eq!(cost, weight, "tour weight and lifted circuit cost disagree");
    Ok(SolveResult { cost, circuit, method })
}

/// Best available exact optimum: the oracle when its enumeration fits the
/// budget, otherwise the TSP route.
pub fn solve_exact(
    g: &Graph,
    w: &TurningCostTable,
    options: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    if !g.is_eulerian() {
        return Err(SolveError::NotEulerian);
    }
    if transition_system_count(g) <= options.enumeration_budget {
        let r = oracle_min_circuit(g, w, options.enumeration_budget)?;
        Ok(r.expect("Eulerian graphs have a circuit"))
    } else {
        solve_via_tsp(g, w, options)
    }
}

/// Whether some Eulerian circuit costs at most `budget`.
pub fn decide_budget(
    g: &Graph,
    w: &TurningCostTable,
    budget: &Rational,
    options: &SolveOptions,
) -> Result<bool, SolveError> {
    Ok(solve_exact(g, w, options)?.cost <= *budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::graph::fixtures::*;
    use crate::model::CostEntry;

    #[test]
    fn tsp_route_matches_oracle_on_fixtures() {
        for (g, w, expected) in [
            (bowtie(), bowtie_costs(&bowtie()), Rational::from_integer(2)),
            (digon(), digon_costs(&digon()), Rational::new(5, 6)),
        ] {
            for contract_forced in [false, true] {
                let opts = SolveOptions { contract_forced, ..SolveOptions::default() };
                let r = solve_via_tsp(&g, &w, &opts).unwrap();
                assert_eq!(r.cost, expected);
                validate_circuit(&g, &r.circuit).unwrap();
            }
        }
    }

    #[test]
    fn decide_bowtie() {
        let g = bowtie();
        let w = bowtie_costs(&g);
        let opts = SolveOptions::default();
        assert!(decide_budget(&g, &w, &Rational::from_integer(2), &opts).unwrap());
        assert!(!decide_budget(&g, &w, &Rational::one(), &opts).unwrap());
        let total: Rational = w
            .iter()
            .filter_map(|(_, e)| match e {
                CostEntry::Finite(c) => Some(c.clone()),
                CostEntry::Forbidden => None,
            })
            .sum();
        assert!(decide_budget(&g, &w, &total, &opts).unwrap());
    }

    #[test]
    fn not_eulerian() {
        let mut g = Graph::new();
        let a = g.add_vertex("a");
        let b = g.add_vertex("b");
        g.add_edge("ab", a, b);
        let w = TurningCostTable::new();
        assert_eq!(solve_via_tsp(&g, &w, &SolveOptions::default()), Err(SolveError::NotEulerian));
        assert_eq!(
            decide_budget(&g, &w, &Rational::zero(), &SolveOptions::default()),
            Err(SolveError::NotEulerian)
        );
    }

    #[test]
    fn bitmask_limit_reported() {
        let g = bowtie();
        let opts = SolveOptions { bitmask_limit: 10, ..SolveOptions::default() };
        assert_eq!(
            solve_via_tsp(&g, &TurningCostTable::new(), &opts),
            Err(SolveError::TooLarge { nodes: 18, limit: 10 })
        );
    }
}
