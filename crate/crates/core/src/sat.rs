//! 3-SAT instances compiled into graphs whose zero-cost Eulerian circuits
//! correspond to satisfying assignments.

use std::fmt;

use thiserror::Error;

use crate::exact::zero_cost::{zero_cost_circuit, ZeroCostError, ZeroCostOptions};
use crate::model::{
    circuit_cost, transitions_of, CircuitError, EdgeId, EulerianCircuit, Graph, HalfEdge, Rational,
    TurningCostTable, VertexId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn from_dimacs(x: i64) -> Self {
        Literal { var: x.unsigned_abs() as usize, positive: x > 0 }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] == self.positive
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("not a 3-SAT instance: {0}")]
    NotThreeSat(String),
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, CnfError> {
        if clauses.is_empty() {
            return Err(CnfError::NotThreeSat("no clauses".into()));
        }
        for (j, c) in clauses.iter().enumerate() {
            if c.iter().any(|l| l.var == 0 || l.var > vars) {
                return Err(CnfError::NotThreeSat(format!("clause {} names a variable outside 1..{vars}", j + 1)));
            }
            if c[0].var == c[1].var || c[1].var == c[2].var || c[0].var == c[2].var {
                return Err(CnfError::NotThreeSat(format!("clause {} repeats a variable", j + 1)));
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// Variables that occur in some clause, ascending.
    pub fn occurring(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vars + 1];
        for c in &self.clauses {
            for l in c {
                seen[l.var] = true;
            }
        }
        (1..=self.vars).filter(|&v| seen[v]).collect()
    }
}

impl fmt::Display for CnfFormula {
    /// DIMACS text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.vars, self.clauses.len())?;
        for c in &self.clauses {
            writeln!(f, "{} {} {} 0", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs())?;
        }
        Ok(())
    }
}

/// Parses DIMACS CNF. Clauses may span lines; `c` lines are comments and a
/// `%` line ends the input.
pub fn parse_cnf(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<(i64, usize)> = Vec::new();
    let syntax = |line: usize, message: String| CnfError::Syntax { line, message };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(syntax(line, "second problem line".into()));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| syntax(line, "expected `p cnf <vars> <clauses>`".into()))?);
            continue;
        }
        if header.is_none() {
            return Err(syntax(line, "clause before the problem line".into()));
        }
        for tok in trimmed.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| syntax(line, format!("bad literal `{tok}`")))?;
            if x == 0 {
                let lits: Vec<i64> = current.drain(..).map(|(x, _)| x).collect();
                if lits.len() != 3 {
                    return Err(CnfError::NotThreeSat(format!(
                        "clause ending on line {line} has {} literals",
                        lits.len()
                    )));
                }
                clauses.push([lits[0], lits[1], lits[2]].map(Literal::from_dimacs));
            } else {
                current.push((x, line));
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(syntax(text.lines().count().max(1), "missing problem line".into()));
    };
    if let Some(&(_, line)) = current.first() {
        return Err(syntax(line, "clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(syntax(1, format!("header declares {count} clauses, found {}", clauses.len())));
    }
    if let Some(l) = clauses.iter().flatten().find(|l| l.var > vars) {
        return Err(syntax(1, format!("variable {} exceeds the declared {vars}", l.var)));
    }
    CnfFormula::new(vars, clauses)
}

/// First satisfying assignment in binary counting order (variable 1 is the
/// lowest bit), or `None`.
pub fn truth_table_satisfiable(f: &CnfFormula) -> Option<Vec<bool>> {
    assert!(f.vars < 64, "truth table over {} variables", f.vars);
    (0u64..1 << f.vars)
        .map(|bits| (0..f.vars).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
        .find(|a| f.eval(a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeTag {
    /// Triangle edge of the clause at this 0-based index.
    Triangle { clause: usize },
    /// Edge from the variable's vertex to the apex.
    Apex { var: usize },
}

/// One literal's triangle corner at its variable vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub clause: usize,
    pub positive: bool,
    pub pair: (HalfEdge, HalfEdge),
}

/// Variable vertex `x_i` with its shaded pairs and the apex half-edges of
/// the unshaded region that follows each of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableVertex {
    pub var: usize,
    pub vertex: VertexId,
    pub occurrences: Vec<Occurrence>,
    pub regions: Vec<Vec<HalfEdge>>,
}

impl VariableVertex {
    /// Cyclic order of half-edges around the vertex.
    pub fn rotation(&self) -> Vec<HalfEdge> {
        self.occurrences
            .iter()
            .zip(&self.regions)
            .flat_map(|(o, r)| [o.pair.0, o.pair.1].into_iter().chain(r.iter().copied()))
            .collect()
    }

    pub fn apex_count(&self) -> usize {
        self.regions.iter().map(Vec::len).sum()
    }
}

#[derive(Clone, Debug)]
pub struct GadgetGraph {
    pub formula: CnfFormula,
    pub graph: Graph,
    pub costs: TurningCostTable,
    pub apex: VertexId,
    pub variables: Vec<VariableVertex>,
    pub tags: Vec<EdgeTag>,
    pub normalized: bool,
    /// Variables in `1..=vars` that occur in no clause and got no vertex.
    pub dropped: Vec<usize>,
    pub construction_ops: u64,
}

impl GadgetGraph {
    pub fn variable(&self, var: usize) -> Option<&VariableVertex> {
        self.variables.iter().find(|x| x.var == var)
    }

    /// Rotation at every vertex; the apex lists its half-edges by id.
    pub fn rotations(&self) -> Vec<Vec<HalfEdge>> {
        let mut out = vec![Vec::new(); self.graph.vertex_count()];
        for x in &self.variables {
            out[x.vertex.0] = x.rotation();
        }
        out[self.apex.0] = self.graph.incident(self.apex).to_vec();
        out
    }

    fn recompute_costs(&mut self, ops: &mut u64) {
        let mut w = TurningCostTable::new();
        for x in &self.variables {
            let rot = x.rotation();
            let d = rot.len();
            for i in 0..d {
                for j in i + 1..d {
                    *ops += 1;
                    let consecutive = j == i + 1 || (i == 0 && j == d - 1);
                    if !consecutive {
                        w.set_cost(&self.graph, rot[i], rot[j], Rational::one())
                            .expect("both half-edges sit at the variable vertex");
                    }
                }
            }
        }
        self.costs = w;
    }
}

/// Builds the gadget graph: a triangle per clause on its three variable
/// vertices, plus apex edges in the unshaded region after each triangle
/// corner (two when the bounding occurrences agree in sign, one otherwise).
/// Only rotation-consecutive pairings at variable vertices are free.
pub fn build_gadget(f: &CnfFormula) -> GadgetGraph {
    let mut ops = 0u64;
    let occurring = f.occurring();
    let dropped = (1..=f.vars).filter(|v| !occurring.contains(v)).collect();
    let mut graph = Graph::new();
    let mut vertex_of_var = vec![None; f.vars + 1];
    for &v in &occurring {
        vertex_of_var[v] = Some(graph.add_vertex(format!("x{v}")));
        ops += 1;
    }
    let apex = graph.add_vertex("u");
    let mut tags = Vec::new();
    let mut occurrences: Vec<Vec<Occurrence>> = vec![Vec::new(); f.vars + 1];
    for (j, clause) in f.clauses.iter().enumerate() {
        let ids: Vec<EdgeId> = (0..3)
            .map(|k| {
                let a = vertex_of_var[clause[k].var].unwrap();
                let b = vertex_of_var[clause[(k + 1) % 3].var].unwrap();
                tags.push(EdgeTag::Triangle { clause: j });
                graph.add_edge(format!("t{}_{k}", j + 1), a, b)
            })
            .collect();
        for k in 0..3 {
            let incoming = HalfEdge::new(ids[(k + 2) % 3], 1);
            let outgoing = HalfEdge::new(ids[k], 0);
            occurrences[clause[k].var].push(Occurrence {
                clause: j,
                positive: clause[k].positive,
                pair: (incoming, outgoing),
            });
            ops += 1;
        }
    }
    let mut variables = Vec::new();
    for &v in &occurring {
        let x = vertex_of_var[v].unwrap();
        let occ = std::mem::take(&mut occurrences[v]);
        let mut regions = Vec::with_capacity(occ.len());
        let mut count = 0;
        for t in 0..occ.len() {
            let next = &occ[(t + 1) % occ.len()];
            let width = if occ[t].positive == next.positive { 2 } else { 1 };
            let region = (0..width)
                .map(|_| {
                    count += 1;
                    ops += 1;
                    tags.push(EdgeTag::Apex { var: v });
                    HalfEdge::new(graph.add_edge(format!("a{v}_{count}"), x, apex), 0)
                })
                .collect();
            regions.push(region);
        }
        variables.push(VariableVertex { var: v, vertex: x, occurrences: occ, regions });
    }
    let mut g = GadgetGraph {
        formula: f.clone(),
        graph,
        costs: TurningCostTable::new(),
        apex,
        variables,
        tags,
        normalized: false,
        dropped,
        construction_ops: 0,
    };
    g.recompute_costs(&mut ops);
    g.construction_ops = ops;
    g
}

/// Adds two parallel apex edges at every variable vertex whose degree is a
/// multiple of 4, placing them in the first unshaded region so region
/// parities are unchanged.
pub fn normalize_mod4(g: &GadgetGraph) -> GadgetGraph {
    let mut out = g.clone();
    let mut ops = 0;
    for idx in 0..out.variables.len() {
        let x = &out.variables[idx];
        if !out.graph.degree(x.vertex).is_multiple_of(4) {
            continue;
        }
        let (var, vertex) = (x.var, x.vertex);
        let mut count = x.apex_count();
        let mut added = Vec::new();
        for _ in 0..2 {
            count += 1;
            let e = out.graph.add_edge(format!("a{var}_{count}"), vertex, out.apex);
            out.tags.push(EdgeTag::Apex { var });
            added.push(HalfEdge::new(e, 0));
        }
        out.variables[idx].regions[0].extend(added);
    }
    out.recompute_costs(&mut ops);
    out.normalized = true;
    out.construction_ops = g.construction_ops + ops;
    out
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error(transparent)]
    Invalid(#[from] CircuitError),
    #[error("circuit costs {0}, not 0")]
    NotZeroCost(Rational),
    #[error("transition at x{0} follows neither the positive nor the negative triangles")]
    AmbiguousTransition(usize),
}

/// Reads the truth value of each variable off the transition at its vertex:
/// following the positive-literal triangles means false, following the
/// negative ones means true. Variables without a vertex are set false.
pub fn extract_assignment(g: &GadgetGraph, c: &EulerianCircuit) -> Result<Vec<bool>, ExtractError> {
    let ts = transitions_of(&g.graph, c)?;
    let cost = circuit_cost(&g.graph, &g.costs, c)?;
    if !cost.is_zero() {
        return Err(ExtractError::NotZeroCost(cost));
    }
    let mut assignment = vec![false; g.formula.vars];
    for x in &g.variables {
        let followed = |o: &Occurrence| ts.partner(o.pair.0) == o.pair.1;
        let pos_followed = x.occurrences.iter().all(|o| followed(o) == o.positive);
        let neg_followed = x.occurrences.iter().all(|o| followed(o) != o.positive);
        assignment[x.var - 1] = match (pos_followed, neg_followed) {
            (true, false) => false,
            (false, true) => true,
            _ => return Err(ExtractError::AmbiguousTransition(x.var)),
        };
    }
    Ok(assignment)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatReport {
    pub satisfiable: bool,
    pub circuit_exists: bool,
    pub agree: bool,
    pub extracted: Option<Vec<bool>>,
    /// Whether the extracted assignment satisfies the formula.
    pub extracted_satisfies: Option<bool>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SatCheckError {
    #[error("{0} variables are too many for a truth table")]
    TooLarge(usize),
    #[error(transparent)]
    Search(#[from] ZeroCostError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

pub const TRUTH_TABLE_LIMIT: usize = 20;

/// Compares truth-table satisfiability with zero-cost circuit existence on
/// the gadget, extracting an assignment when a circuit is found.
pub fn check_sat_equivalence(
    f: &CnfFormula,
    normalize: bool,
    options: ZeroCostOptions,
) -> Result<SatReport, SatCheckError> {
    if f.vars > TRUTH_TABLE_LIMIT {
        return Err(SatCheckError::TooLarge(f.vars));
    }
    let satisfiable = truth_table_satisfiable(f).is_some();
    let mut g = build_gadget(f);
    if normalize {
        g = normalize_mod4(&g);
    }
    let circuit = zero_cost_circuit(&g.graph, &g.costs, options)?;
    let extracted = circuit.as_ref().map(|c| extract_assignment(&g, c)).transpose()?;
    let extracted_satisfies = extracted.as_ref().map(|a| f.eval(a));
    Ok(SatReport {
        satisfiable,
        circuit_exists: circuit.is_some(),
        agree: satisfiable == circuit.is_some(),
        extracted,
        extracted_satisfies,
    })
}

/// The 8-clause formula over x1, x2, x3 containing every sign pattern.
pub fn all_sign_patterns() -> CnfFormula {
    let clauses = (0..8)
        .map(|bits: u8| {
            [1, 2, 3].map(|v| Literal { var: v, positive: bits >> (v - 1) & 1 == 0 })
        })
        .collect();
    CnfFormula::new(3, clauses).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(x: i64) -> Literal {
        Literal::from_dimacs(x)
    }

    fn formula(vars: usize, clauses: &[[i64; 3]]) -> CnfFormula {
        CnfFormula::new(vars, clauses.iter().map(|c| c.map(lit)).collect()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = parse_cnf("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(f, formula(3, &[[1, 2, 3]]));
        assert!(matches!(parse_cnf("p cnf 2 1\n1 1 2 0\n"), Err(CnfError::NotThreeSat(_))));
        assert!(matches!(parse_cnf("p cnf 3 0\n"), Err(CnfError::NotThreeSat(_))));
        assert!(matches!(parse_cnf("p cnf 3 1\n1 2 0\n"), Err(CnfError::NotThreeSat(_))));
        assert!(matches!(parse_cnf("p cnf 3 1\n1 x 3 0\n"), Err(CnfError::Syntax { line: 2, .. })));
        assert!(matches!(parse_cnf("1 2 3 0\n"), Err(CnfError::Syntax { line: 1, .. })));
        let multi = parse_cnf("c comment\np cnf 4 2\n1 -2\n 3 0 -1 2 4 0\n%\n0\n").unwrap();
        assert_eq!(multi, formula(4, &[[1, -2, 3], [-1, 2, 4]]));
        assert_eq!(parse_cnf(&multi.to_string()).unwrap(), multi);
    }

    #[test]
    fn one_clause_gadget() {
        let g = build_gadget(&formula(3, &[[1, 2, 3]]));
        assert_eq!(g.graph.vertex_count(), 4);
        assert_eq!(g.graph.edge_count(), 9);
        for x in &g.variables {
            assert_eq!(g.graph.degree(x.vertex), 4);
            assert_eq!(x.apex_count(), 2);
        }
        assert_eq!(g.graph.degree(g.apex), 6);
        assert!(g.graph.is_eulerian());
    }

    #[test]
    fn two_clause_gadget_degrees() {
        let g = build_gadget(&formula(3, &[[1, 2, 3], [-1, 2, 3]]));
        let deg = |v: usize| g.graph.degree(g.variable(v).unwrap().vertex);
        assert_eq!((deg(1), deg(2), deg(3)), (6, 8, 8));
        // 2 apex edges at x1 and 4 each at x2, x3
        assert_eq!(g.graph.degree(g.apex), 10);
    }

    #[test]
    fn rotation_costs() {
        let g = build_gadget(&formula(3, &[[1, 2, 3]]));
        let x = &g.variables[0];
        let rot = x.rotation();
        assert_eq!(rot.len(), 4);
        assert!(g.costs.is_free(rot[0], rot[1]));
        assert!(g.costs.is_free(rot[3], rot[0]));
        assert_eq!(g.costs.cost(rot[0], rot[2]), Rational::one());
        // apex pairings stay implicit
        let at_u = g.graph.incident(g.apex);
        assert!(at_u.iter().all(|&a| at_u.iter().all(|&b| g.costs.entry(a, b).is_none())));
    }

    #[test]
    fn normalize_bumps_multiples_of_four() {
        let g = normalize_mod4(&build_gadget(&formula(3, &[[1, 2, 3]])));
        for x in &g.variables {
            assert_eq!(g.graph.degree(x.vertex), 6);
        }
        let g = normalize_mod4(&build_gadget(&formula(3, &[[1, 2, 3], [-1, 2, 3]])));
        let deg = |v: usize| g.graph.degree(g.variable(v).unwrap().vertex);
        assert_eq!((deg(1), deg(2), deg(3)), (6, 10, 10));
        assert!(g.graph.is_eulerian());
    }

    #[test]
    fn dropped_variables() {
        let g = build_gadget(&formula(5, &[[1, -3, 4]]));
        assert_eq!(g.dropped, vec![2, 5]);
        assert_eq!(g.graph.vertex_count(), 4);
    }

    #[test]
    fn one_clause_equivalence() {
        let f = formula(3, &[[1, 2, 3]]);
        let r = check_sat_equivalence(&f, false, ZeroCostOptions::default()).unwrap();
        assert!(r.satisfiable && r.circuit_exists && r.agree);
        let a = r.extracted.unwrap();
        assert!(a.iter().any(|&b| b));
        assert_eq!(r.extracted_satisfies, Some(true));
    }

    #[test]
    fn two_clause_extraction() {
        let f = formula(3, &[[1, 2, 3], [-1, 2, 3]]);
        let r = check_sat_equivalence(&f, false, ZeroCostOptions::default()).unwrap();
        assert!(r.agree);
        assert_eq!(r.extracted_satisfies, Some(true));
    }

    #[test]
    fn unsatisfiable_all_patterns() {
        let f = all_sign_patterns();
        assert_eq!(truth_table_satisfiable(&f), None);
        let r = check_sat_equivalence(&f, false, ZeroCostOptions::default()).unwrap();
        assert!(!r.satisfiable && !r.circuit_exists && r.agree);
    }

    #[test]
    fn nonzero_circuit_rejected() {
        let f = formula(3, &[[1, 2, 3]]);
        let g = build_gadget(&f);
        let r = crate::exact::oracle::oracle_min_circuit(&g.graph, &g.costs, u128::MAX).unwrap().unwrap();
        assert!(r.cost.is_zero());
        // force a costly circuit: the best circuit under an inverted table
        let mut inverted = TurningCostTable::new();
        for v in g.graph.vertices() {
            let inc = g.graph.incident(v);
            for i in 0..inc.len() {
                for j in i + 1..inc.len() {
                    if g.costs.is_free(inc[i], inc[j]) && v != g.apex {
                        inverted.set_cost(&g.graph, inc[i], inc[j], Rational::one()).unwrap();
                    }
                }
            }
        }
        let costly = crate::exact::oracle::oracle_min_circuit(&g.graph, &inverted, u128::MAX).unwrap().unwrap();
        assert!(matches!(extract_assignment(&g, &costly.circuit), Err(ExtractError::NotZeroCost(_))));
    }
}
