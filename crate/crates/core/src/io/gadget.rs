use thiserror::Error;

use super::{emit_graph, parse_graph, GraphFile, ParseError};
use crate::sat::{build_gadget, normalize_mod4, CnfError, CnfFormula, GadgetGraph, Literal};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GadgetFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("not a gadget file: {0}")]
    MissingAnnotation(String),
    #[error("bad gadget annotation `{0}`")]
    BadAnnotation(String),
    #[error(transparent)]
    Formula(#[from] CnfError),
    #[error("graph does not match the gadget of its recorded formula")]
    Mismatch,
}

/// Graph file for a gadget, with the formula recorded in `#@` lines so the
/// structure can be rebuilt when the file is read back.
pub fn emit_gadget(g: &GadgetGraph) -> String {
    let mut annotations = vec![
        "gadget".to_string(),
        format!("cnf {} {}", g.formula.vars, g.formula.clauses.len()),
    ];
    for c in &g.formula.clauses {
        annotations.push(format!("clause {} {} {}", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs()));
    }
    if g.normalized {
        annotations.push("normalized".to_string());
    }
    let file = GraphFile {
        name: "gadget".to_string(),
        graph: g.graph.clone(),
        costs: g.costs.clone(),
        rotation: Some(g.rotations()),
        outer: None,
        annotations,
    };
    emit_graph(&file)
}

/// Rebuilds the gadget from the annotations of a parsed graph file and
/// checks that the graph and costs agree with it.
pub fn gadget_from_file(text: &str) -> Result<GadgetGraph, GadgetFileError> {
    let file = parse_graph(text)?;
    if !file.annotations.iter().any(|a| a == "gadget") {
        return Err(GadgetFileError::MissingAnnotation("no `#@ gadget` line".into()));
    }
    let mut vars = None;
    let mut clauses = Vec::new();
    let mut normalized = false;
    for a in &file.annotations {
        let t: Vec<&str> = a.split_whitespace().collect();
        match t.as_slice() {
            ["gadget"] => {}
            ["normalized"] => normalized = true,
            ["cnf", n, _] => vars = Some(n.parse::<usize>().map_err(|_| GadgetFileError::BadAnnotation(a.clone()))?),
            ["clause", l @ ..] if l.len() == 3 => {
                let mut lits = [Literal::from_dimacs(1); 3];
                for (slot, x) in lits.iter_mut().zip(l) {
                    let x: i64 = x.parse().map_err(|_| GadgetFileError::BadAnnotation(a.clone()))?;
                    if x == 0 {
                        return Err(GadgetFileError::BadAnnotation(a.clone()));
                    }
                    *slot = Literal::from_dimacs(x);
                }
                clauses.push(lits);
            }
            _ => {}
        }
    }
    let vars = vars.ok_or_else(|| GadgetFileError::MissingAnnotation("no `#@ cnf` line".into()))?;
    let formula = CnfFormula::new(vars, clauses)?;
    let mut g = build_gadget(&formula);
    if normalized {
        g = normalize_mod4(&g);
    }
    if g.graph != file.graph || g.costs != file.costs {
        return Err(GadgetFileError::Mismatch);
    }
    if let Some(rotation) = &file.rotation {
        if *rotation != g.rotations() {
            return Err(GadgetFileError::Mismatch);
        }
    }
    Ok(g)
}
