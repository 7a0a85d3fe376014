//! Brute-force optimum over all transition systems.

use thiserror::Error;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::model::{EdgeId, EulerianCircuit, Graph, HalfEdge, Rational, TurningCostTable};

use super::{Method, SolveResult};

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("{combinations} transition systems exceed the enumeration budget of {budget}")]
    InstanceTooLarge { combinations: u128, budget: u128 },
}

/// All perfect matchings of `items`, each as a list of pairs.
pub fn perfect_matchings(items: &[HalfEdge]) -> Vec<Vec<(HalfEdge, HalfEdge)>> {
    fn extend(rest: &mut Vec<HalfEdge>, current: &mut Vec<(HalfEdge, HalfEdge)>, out: &mut Vec<Vec<(HalfEdge, HalfEdge)>>) {
        if rest.is_empty() {
            out.push(current.clone());
            return;
        }
        let first = rest.remove(0);
        for i in 0..rest.len() {
            let other = rest.remove(i);
            current.push((first, other));
            extend(rest, current, out);
            current.pop();
            rest.insert(i, other);
        }
        rest.insert(0, first);
    }
    let mut out = Vec::new();
    extend(&mut items.to_vec(), &mut Vec::with_capacity(items.len() / 2), &mut out);
    out
}

fn double_factorial_odd(degree: usize) -> u128 {
    (1..degree).step_by(2).map(|x| x as u128).product::<u128>().max(1)
}

/// Number of transition systems: product of `(deg - 1)!!` over vertices.
pub fn transition_system_count(g: &Graph) -> u128 {
    g.vertices()
        .map(|v| double_factorial_odd(g.degree(v)))
        .try_fold(1u128, |acc, x| acc.checked_mul(x))
        .unwrap_or(u128::MAX)
}

/// Minimum-cost Eulerian circuit by exhaustive enumeration.
///
/// Every combination of per-vertex perfect matchings is followed into its
/// closed trails; combinations giving a single circuit compete on
/// `(cost, canonical circuit)`. Branches whose partial cost already exceeds
/// the best complete cost are skipped, which keeps the result exact because
/// costs are non-negative.
pub fn oracle_min_circuit(
    g: &Graph,
    w: &TurningCostTable,
    budget: u128,
) -> Result<Option<SolveResult>, OracleError> {
    if !g.is_eulerian() {
        return Err(OracleError::NotEulerian);
    }
    let combinations = transition_system_count(g);
    if combinations > budget {
        return Err(OracleError::InstanceTooLarge { combinations, budget });
    }
    if g.edge_count() == 0 {
        return Ok(Some(SolveResult {
            cost: Rational::zero(),
            circuit: EulerianCircuit::new(Vec::new()),
            method: Method::Oracle,
        }));
    }
    let big_m = w.big_m();
    let vertices: Vec<_> = g.vertices().filter(|&v| g.degree(v) > 0).collect();
    let pair_costs: Vec<Rational> = vertices
        .iter()
        .flat_map(|&v| {
            let hs = g.incident(v);
            (0..hs.len()).flat_map(move |i| (i + 1..hs.len()).map(move |j| (hs[i], hs[j])))
        })
        .map(|(a, b)| w.cost_with(a, b, &big_m))
        .collect();
    // integer costs on a common denominator when they fit, exact rationals otherwise
    let scale = pair_costs.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let fits = pair_costs
        .iter()
        .map(|c| c.scaled_integer(&scale))
        .try_fold(0i128, |acc, x| acc.checked_add(x?));
    let matchings: Vec<Vec<Vec<(HalfEdge, HalfEdge)>>> =
        vertices.iter().map(|&v| perfect_matchings(g.incident(v))).collect();
    let best = if fits.is_some() {
        let cost = |a, b| w.cost_with(a, b, &big_m).scaled_integer(&scale).expect("checked above");
        let options = priced(g, matchings, cost, 0i128);
        search(g, options, 0i128).map(|(c, circuit)| (Rational::from_scaled(c, &scale), circuit))
    } else {
        let options = priced(g, matchings, |a, b| w.cost_with(a, b, &big_m), Rational::zero());
        search(g, options, Rational::zero())
    };
    assert!(best.is_some(), "a connected even graph has an Eulerian circuit");
    Ok(best.map(|(cost, circuit)| SolveResult { cost, circuit, method: Method::Oracle }))
}

type Priced<C> = Vec<Vec<(Vec<(HalfEdge, HalfEdge)>, C)>>;

/// Attaches a cost to every matching, looking each pairing up once.
fn priced<C>(
    g: &Graph,
    matchings: Vec<Vec<Vec<(HalfEdge, HalfEdge)>>>,
    cost: impl Fn(HalfEdge, HalfEdge) -> C,
    zero: C,
) -> Priced<C>
where
    C: Clone + std::ops::Add<Output = C>,
{
    let mut table: Vec<Option<C>> = vec![None; 4 * g.edge_count() * g.edge_count()];
    let n = 2 * g.edge_count();
    matchings
        .into_iter()
        .map(|opts| {
            opts.into_iter()
                .map(|m| {
                    let mut total = zero.clone();
                    for &(a, b) in &m {
                        let c = table[slot(a) * n + slot(b)].get_or_insert_with(|| cost(a, b));
                        total = total + c.clone();
                    }
                    (m, total)
                })
                .collect()
        })
        .collect()
}

fn slot(h: HalfEdge) -> usize {
    2 * h.edge.0 + h.end as usize
}

/// Depth-first over one matching per vertex, cheapest options first, keeping
/// the least `(cost, canonical circuit)` among single-circuit systems.
fn search<C>(g: &Graph, mut options: Priced<C>, zero: C) -> Option<(C, EulerianCircuit)>
where
    C: Clone + Ord + std::ops::Add<Output = C>,
{
    for opts in &mut options {
        opts.sort_by(|a, b| a.1.cmp(&b.1));
    }
    // cheapest completion of vertices depth.. for pruning
    let mut floor = vec![zero.clone(); options.len() + 1];
    for d in (0..options.len()).rev() {
        floor[d] = floor[d + 1].clone() + options[d][0].1.clone();
    }

    struct State<'a, C> {
        g: &'a Graph,
        options: &'a Priced<C>,
        floor: &'a [C],
        partner: Vec<HalfEdge>,
        best: Option<(C, EulerianCircuit)>,
    }

    impl<C: Clone + Ord + std::ops::Add<Output = C>> State<'_, C> {
        fn single_circuit(&self) -> Option<EulerianCircuit> {
            let m = self.g.edge_count();
            let start = HalfEdge::new(EdgeId(0), 0);
            let mut h = start;
            let mut len = 0;
            loop {
                len += 1;
                h = self.partner[slot(h.opposite())];
                if h == start || len > m {
                    break;
                }
            }
            if len != m {
                return None;
            }
            let mut entries = Vec::with_capacity(m);
            let mut h = start;
            for _ in 0..m {
                entries.push(h);
                h = self.partner[slot(h.opposite())];
            }
            Some(EulerianCircuit::new(entries))
        }

        fn run(&mut self, depth: usize, partial: C) {
            if depth == self.options.len() {
                if self.best.as_ref().is_some_and(|(b, _)| partial > *b) {
                    return;
                }
                if let Some(c) = self.single_circuit() {
                    let candidate = (partial, c.canonical());
                    if self.best.as_ref().is_none_or(|b| candidate < *b) {
                        self.best = Some(candidate);
                    }
                }
                return;
            }
            for k in 0..self.options[depth].len() {
                let (pairs, cost) = &self.options[depth][k];
                let next = partial.clone() + cost.clone();
                if let Some((b, _)) = &self.best {
                    // options are sorted, so every later one is pruned too
                    if next.clone() + self.floor[depth + 1].clone() > *b {
                        break;
                    }
                }
                for &(a, b) in pairs {
                    self.partner[slot(a)] = b;
                    self.partner[slot(b)] = a;
                }
                self.run(depth + 1, next);
            }
        }
    }

    let unset = HalfEdge::new(EdgeId(usize::MAX), 0);
    let mut state = State { g, options: &options, floor: &floor, partner: vec![unset; 2 * g.edge_count()], best: None };
    state.run(0, zero);
    state.best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::graph::fixtures::*;
    use crate::model::{circuit_cost, validate_circuit};

    #[test]
    fn matching_counts() {
        let hs: Vec<HalfEdge> = (0..6).map(|e| HalfEdge::new(EdgeId(e), 0)).collect();
        assert_eq!(perfect_matchings(&hs[..2]).len(), 1);
        assert_eq!(perfect_matchings(&hs[..4]).len(), 3);
        assert_eq!(perfect_matchings(&hs).len(), 15);
        assert_eq!(double_factorial_odd(8), 105);
        assert_eq!(transition_system_count(&bowtie()), 3);
    }

    #[test]
    fn triangle_forced() {
        let g = triangle();
        let mut w = TurningCostTable::new();
        for v in g.vertices() {
            let inc = g.incident(v);
            w.set_cost(&g, inc[0], inc[1], Rational::one()).unwrap();
        }
        let r = oracle_min_circuit(&g, &w, DEFAULT_ENUMERATION_BUDGET).unwrap().unwrap();
        assert_eq!(r.cost, Rational::from_integer(3));
    }

    #[test]
    fn bowtie_needs_mixed_transition() {
        let g = bowtie();
        let w = bowtie_costs(&g);
        let r = oracle_min_circuit(&g, &w, DEFAULT_ENUMERATION_BUDGET).unwrap().unwrap();
        assert_eq!(r.cost, Rational::from_integer(2));
        validate_circuit(&g, &r.circuit).unwrap();
        assert_eq!(circuit_cost(&g, &w, &r.circuit).unwrap(), r.cost);
        assert_eq!(r.circuit, r.circuit.canonical());
    }

    #[test]
    fn digon_forced() {
        let g = digon();
        let w = digon_costs(&g);
        let r = oracle_min_circuit(&g, &w, DEFAULT_ENUMERATION_BUDGET).unwrap().unwrap();
        assert_eq!(r.cost, Rational::new(5, 6));
    }

    #[test]
    fn errors() {
        let mut g = Graph::new();
        let a = g.add_vertex("a");
        let b = g.add_vertex("b");
        g.add_edge("ab", a, b);
        assert_eq!(
            oracle_min_circuit(&g, &TurningCostTable::new(), 10),
            Err(OracleError::NotEulerian)
        );
        assert!(matches!(
            oracle_min_circuit(&bowtie(), &TurningCostTable::new(), 2),
            Err(OracleError::InstanceTooLarge { combinations: 3, budget: 2 })
        ));
    }
}
