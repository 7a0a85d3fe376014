mod common;

use proptest::prelude::*;

use turncost::exact::oracle::{oracle_min_circuit, DEFAULT_ENUMERATION_BUDGET};
use turncost::io::{emit_circuit, emit_graph, emit_tsp, export_dot, parse_circuit, parse_graph, parse_tsp, GraphFile};
use turncost::reduce::{line_graph_weighted, subdivide_twice};

/// Checker for the undirected DOT subset: `[strict] graph [ID] { stmt* }`
/// with node, edge (`--`), attribute and `ID = ID` statements.
mod dot {
    #[derive(Debug, PartialEq)]
    enum Tok {
        Id(String),
        Sym(&'static str),
    }

    fn lex(s: &str) -> Result<Vec<Tok>, String> {
        let c: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut out = Vec::new();
        while i < c.len() {
            match c[i] {
                w if w.is_whitespace() => i += 1,
                '{' | '}' | '[' | ']' | ';' | ',' | '=' => {
                    out.push(Tok::Sym(match c[i] {
                        '{' => "{",
                        '}' => "}",
                        '[' => "[",
                        ']' => "]",
                        ';' => ";",
                        ',' => ",",
                        _ => "=",
                    }));
                    i += 1;
                }
                '-' if c.get(i + 1) == Some(&'-') => {
                    out.push(Tok::Sym("--"));
                    i += 2;
                }
                '-' if c.get(i + 1) == Some(&'>') => return Err("directed edge in an undirected graph".into()),
                '"' => {
                    let mut text = String::new();
                    i += 1;
                    loop {
                        match c.get(i) {
                            None => return Err("unterminated string".into()),
                            Some('"') => break,
                            Some('\\') => {
                                text.push(*c.get(i + 1).ok_or("dangling escape")?);
                                i += 2;
                            }
                            Some(&ch) => {
                                text.push(ch);
                                i += 1;
                            }
                        }
                    }
                    i += 1;
                    out.push(Tok::Id(text));
                }
                ch if ch.is_alphanumeric() || ch == '_' || ch == '.' => {
                    let start = i;
                    while i < c.len() && (c[i].is_alphanumeric() || c[i] == '_' || c[i] == '.') {
                        i += 1;
                    }
                    let word: String = c[start..i].iter().collect();
                    let numeral = word.chars().next().unwrap().is_ascii_digit() || word.starts_with('.');
                    if numeral && word.parse::<f64>().is_err() {
                        return Err(format!("bad numeral {word}"));
                    }
                    if !numeral && word.contains('.') {
                        return Err(format!("bad identifier {word}"));
                    }
                    out.push(Tok::Id(word));
                }
                ch => return Err(format!("unexpected character {ch:?}")),
            }
        }
        Ok(out)
    }

    pub struct Summary {
        pub nodes: usize,
        pub edges: Vec<Vec<(String, String)>>,
    }

    pub fn check(s: &str) -> Result<Summary, String> {
        let t = lex(s)?;
        let mut i = 0;
        let id = |i: &mut usize| match t.get(*i) {
            Some(Tok::Id(x)) => {
                *i += 1;
                Ok(x.clone())
            }
            other => Err(format!("expected ID, found {other:?}")),
        };
        let sym = |i: &mut usize, s: &str| match t.get(*i) {
            Some(Tok::Sym(x)) if *x == s => {
                *i += 1;
                true
            }
            _ => false,
        };
        let keyword = |x: &Tok, k: &str| matches!(x, Tok::Id(w) if w.eq_ignore_ascii_case(k));
        if t.first().is_some_and(|x| keyword(x, "strict")) {
            i += 1;
        }
        if !t.get(i).is_some_and(|x| keyword(x, "graph")) {
            return Err("expected `graph`".into());
        }
        i += 1;
        if matches!(t.get(i), Some(Tok::Id(_))) {
            i += 1;
        }
        if !sym(&mut i, "{") {
            return Err("expected `{`".into());
        }
        let mut summary = Summary { nodes: 0, edges: Vec::new() };
        loop {
            if sym(&mut i, "}") {
                break;
            }
            let first = id(&mut i)?;
            if sym(&mut i, "=") {
                id(&mut i)?;
            } else {
                let mut chain = vec![first.clone()];
                while sym(&mut i, "--") {
                    chain.push(id(&mut i)?);
                }
                let mut attrs = Vec::new();
                while sym(&mut i, "[") {
                    while !sym(&mut i, "]") {
                        let k = id(&mut i)?;
                        if !sym(&mut i, "=") {
                            return Err("expected `=` in attribute".into());
                        }
                        attrs.push((k, id(&mut i)?));
                        if !sym(&mut i, ",") {
                            sym(&mut i, ";");
                        }
                    }
                }
                if chain.len() > 1 {
                    summary.edges.push(attrs);
                } else if !["graph", "node", "edge"].iter().any(|k| first.eq_ignore_ascii_case(k)) {
                    summary.nodes += 1;
                }
            }
            sym(&mut i, ";");
        }
        if i != t.len() {
            return Err("trailing tokens".into());
        }
        Ok(summary)
    }
}

#[test]
fn dot_export_of_digon() {
    let f = parse_graph(include_str!("../../../data/digon.eg")).unwrap();
    let s = dot::check(&export_dot(&f.name, &f.graph, None)).unwrap();
    assert_eq!(s.nodes, 2);
    assert_eq!(s.edges.len(), 2);
}

#[test]
fn dot_ids_with_awkward_names_are_quoted() {
    let text = "graph g\nvertex a\"b\nvertex c\\d\nedge -- a\"b c\\d\nedge x.y c\\d a\"b\n";
    let f = parse_graph(text).unwrap();
    assert!(dot::check(&export_dot("strict \"name\"", &f.graph, None)).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dot_export_with_circuit_labels_positions(seed in any::<u64>()) {
        let (g, w) = common::random_instance(seed, 6, 0.1);
        let best = oracle_min_circuit(&g, &w, DEFAULT_ENUMERATION_BUDGET).unwrap().unwrap();
        let s = dot::check(&export_dot("r", &g, Some(&best.circuit))).unwrap();
        prop_assert_eq!(s.nodes, g.vertex_count());
        let mut labels: Vec<usize> = s
            .edges
            .iter()
            .map(|attrs| attrs.iter().find(|(k, _)| k == "label").unwrap().1.parse().unwrap())
            .collect();
        labels.sort_unstable();
        prop_assert_eq!(labels, (1..=g.edge_count()).collect::<Vec<_>>());
    }

    #[test]
    fn graph_files_round_trip(seed in any::<u64>()) {
        let (g, w) = common::random_instance(seed, 7, 0.1);
        let f = GraphFile::new("r", g, w);
        let text = emit_graph(&f);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(emit_graph(&back), text);
    }

    #[test]
    fn plane_files_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let p = common::random_four_regular_plane(&mut r, 8);
        let w = common::random_costs(&mut r, p.graph(), 0.2);
        let mut f = GraphFile::new("p", p.graph().clone(), w);
        f.rotation = Some(p.graph().vertices().map(|v| p.rotation(v).to_vec()).collect());
        f.outer = Some(p.outer());
        let back = parse_graph(&emit_graph(&f)).unwrap();
        prop_assert_eq!(back.plane().unwrap().unwrap(), p);
    }

    #[test]
    fn circuit_and_tsp_files_round_trip(seed in any::<u64>()) {
        let (g, w) = common::random_instance(seed, 6, 0.0);
        let best = oracle_min_circuit(&g, &w, DEFAULT_ENUMERATION_BUDGET).unwrap().unwrap();
        let (_, c) = parse_circuit(&emit_circuit("c", &g, &best.circuit), &g).unwrap();
        prop_assert_eq!(c, best.circuit);
        let l = line_graph_weighted(&subdivide_twice(&g, &w));
        let text = emit_tsp("t", &l.tsp);
        let (_, t) = parse_tsp(&text).unwrap();
        prop_assert_eq!(emit_tsp("t", &t), text);
    }

    #[test]
    fn parsers_never_panic_on_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_graph(&text);
        let _ = parse_tsp(&text);
        let _ = turncost::sat::parse_cnf(&text);
        let _ = turncost::io::gadget_from_file(&text);
    }

    #[test]
    fn emit_parse_is_idempotent_on_mangled_files(seed in any::<u64>(), cut in 0usize..2000, junk in "[a-z0-9 ./#@-]{0,12}") {
        let (g, w) = common::random_instance(seed, 5, 0.2);
        let text = emit_graph(&GraphFile::new("m", g, w));
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        let at = cut % lines.len();
        lines[at] = junk;
        if let Ok(f) = parse_graph(&lines.join("\n")) {
            let once = emit_graph(&f);
            prop_assert_eq!(emit_graph(&parse_graph(&once).unwrap()), once);
        }
    }

    #[test]
    fn record_soup_never_panics(lines in proptest::collection::vec(
        prop_oneof![
            "vertex [a-c]",
            "edge [a-e] [a-c] [a-c]",
            "cost [a-c] [a-e]\\.[01] [a-e]\\.[01] [0-3]/[0-3]",
            "cost [a-c] [a-e]\\.[01] [a-e]\\.[01] forbid",
            "rotation [a-c]( [a-e]\\.[01]){0,4}",
            "outer [0-3]",
            "graph [a-z]",
        ],
        0..20,
    )) {
        let text = lines.join("\n");
        if let Ok(f) = parse_graph(&text) {
            let once = emit_graph(&f);
            prop_assert_eq!(emit_graph(&parse_graph(&once).unwrap()), once);
            let _ = f.plane();
        }
    }
}
