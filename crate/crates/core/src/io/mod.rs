//! Text formats: graph files, circuit files, TSP files, gadget files and
//! Graphviz export.

mod dot;
mod gadget;
mod graph_file;
mod tsp_file;

pub use dot::export_dot;
pub use gadget::{emit_gadget, gadget_from_file, GadgetFileError};
pub use graph_file::{emit_circuit, emit_graph, parse_circuit, parse_graph, GraphFile};
pub use tsp_file::{emit_tsp, parse_tsp};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown reference: {message}")]
    DanglingReference { line: usize, message: String },
    #[error("line {line}: duplicate id: {message}")]
    DuplicateId { line: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::DanglingReference { line, .. }
            | ParseError::DuplicateId { line, .. }
            | ParseError::Invalid { line, .. } => *line,
        }
    }
}

/// Non-empty, comment-stripped lines as `(line number, tokens)`.
/// `#@` annotation lines are returned separately with their text.
pub(crate) fn records(text: &str) -> (Vec<(usize, Vec<&str>)>, Vec<String>) {
    let mut out = Vec::new();
    let mut annotations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if let Some(note) = trimmed.strip_prefix("#@") {
            annotations.push(note.trim().to_string());
            continue;
        }
        let content = match trimmed.find('#') {
            Some(p) => &trimmed[..p],
            None => trimmed,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if !tokens.is_empty() {
            out.push((i + 1, tokens));
        }
    }
    (out, annotations)
}
