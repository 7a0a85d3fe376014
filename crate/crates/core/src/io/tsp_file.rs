use std::collections::HashMap;
use std::fmt::Write;

use super::{records, ParseError};
use crate::exact::held_karp::WeightedGraph;
use crate::model::Rational;

pub fn emit_tsp(name: &str, t: &WeightedGraph) -> String {
    let mut out = format!("tsp {name}\n");
    for x in 0..t.node_count() {
        writeln!(out, "node {}", t.name(x)).unwrap();
    }
    for (a, b, w) in t.arcs() {
        writeln!(out, "arc {} {} {w}", t.name(a), t.name(b)).unwrap();
    }
    out
}

pub fn parse_tsp(text: &str) -> Result<(String, WeightedGraph), ParseError> {
    let (lines, _) = records(text);
    let mut name = None;
    let mut t = WeightedGraph::new();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let syntax = |line: usize, message: String| ParseError::Syntax { line, message };
    for (line, tok) in &lines {
        let line = *line;
        match (tok[0], tok.len()) {
            ("tsp", 2) => {
                if name.replace(tok[1].to_string()).is_some() {
                    return Err(ParseError::DuplicateId { line, message: "second `tsp` line".into() });
                }
            }
            ("node", 2) => {
                if ids.contains_key(tok[1]) {
                    return Err(ParseError::DuplicateId { line, message: format!("node `{}`", tok[1]) });
                }
                ids.insert(tok[1], t.add_node(tok[1]));
            }
            ("arc", 4) => {
                let [a, b] = [tok[1], tok[2]].map(|x| {
                    ids.get(x)
                        .copied()
                        .ok_or_else(|| ParseError::DanglingReference { line, message: format!("node `{x}`") })
                });
                let w: Rational = tok[3].parse().map_err(|e: crate::model::RationalParseError| syntax(line, e.to_string()))?;
                if w.is_negative() {
                    return Err(ParseError::Invalid { line, message: format!("negative weight {w}") });
                }
                t.add_arc(a?, b?, w).map_err(|e| ParseError::Invalid { line, message: e.to_string() })?;
            }
            (other, _) => return Err(syntax(line, format!("unexpected `{other}` record"))),
        }
    }
    Ok((name.unwrap_or_else(|| "t".into()), t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "tsp k3\nnode a\nnode b\nnode c\narc a b 1/2\narc a c 0/1\narc b c 3/1\n";
        let (name, t) = parse_tsp(text).unwrap();
        assert_eq!(name, "k3");
        assert_eq!(t.arc_count(), 3);
        assert_eq!(emit_tsp(&name, &t), text);
    }

    #[test]
    fn rejects_non_simple() {
        assert!(matches!(parse_tsp("node a\narc a a 1/1\n"), Err(ParseError::Invalid { line: 2, .. })));
        assert!(matches!(
            parse_tsp("node a\nnode b\narc a b 1/1\narc b a 2/1\n"),
            Err(ParseError::Invalid { line: 4, .. })
        ));
        assert!(matches!(parse_tsp("node a\narc a z 1/1\n"), Err(ParseError::DanglingReference { .. })));
    }
}
