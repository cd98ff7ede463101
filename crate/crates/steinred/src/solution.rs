//! Plain-text solutions: a `Value <objective>` line, then one `V <id>` line
//! per vertex and one `E <i> <j>` line per edge, all ids 1-based and sorted.

use std::fmt::Write as _;

use steinred_core::{Cost, PcInstance, SteinerTree};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolutionError {
    #[error("missing Value line")]
    MissingValue,
    #[error("{what} at line {line}")]
    Line { line: usize, what: String },
}

/// A parsed solution file.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFile {
    /// The objective value the file claims.
    pub value: Cost,
    pub tree: SteinerTree,
}

pub fn write_solution(inst: &PcInstance, tree: &SteinerTree, value: Cost) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Value {value}");
    for &v in &tree.vertices {
        let _ = writeln!(out, "V {}", v + 1);
    }
    let mut edges: Vec<(usize, usize)> = tree
        .edges
        .iter()
        .map(|&e| {
            let ed = inst.edge(e);
            (ed.u.min(ed.v) + 1, ed.u.max(ed.v) + 1)
        })
        .collect();
    edges.sort_unstable();
    for (i, j) in edges {
        let _ = writeln!(out, "E {i} {j}");
    }
    out
}

/// Reads a solution of `inst`. Edges are looked up by their endpoints.
pub fn parse_solution(inst: &PcInstance, text: &str) -> Result<SolutionFile, SolutionError> {
    let err = |line: usize, what: String| SolutionError::Line { line, what };
    let id = |token: Option<&str>, line: usize| -> Result<usize, SolutionError> {
        let token = token.ok_or_else(|| err(line, "missing vertex id".into()))?;
        match token.parse::<usize>() {
            Ok(i) if i >= 1 && i <= inst.vertex_capacity() => Ok(i - 1),
            _ => Err(err(line, format!("invalid vertex id '{token}'"))),
        }
    };
    let mut value = None;
    let mut tree = SteinerTree::default();
    for (no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        let mut words = line.split_whitespace();
        match words.next() {
            None => {}
            Some("Value") => {
                let token = words.next().unwrap_or_default();
                value = Some(
                    token
                        .parse()
                        .map_err(|_| err(no, format!("malformed value '{token}'")))?,
                );
            }
            Some("V") => {
                tree.vertices.insert(id(words.next(), no)?);
            }
            Some("E") => {
                let (u, v) = (id(words.next(), no)?, id(words.next(), no)?);
                let e = inst
                    .find_edge(u, v)
                    .ok_or_else(|| err(no, format!("no edge {} {}", u + 1, v + 1)))?;
                tree.edges.insert(e);
            }
            Some(other) => return Err(err(no, format!("unknown record '{other}'"))),
        }
    }
    Ok(SolutionFile {
        value: value.ok_or(SolutionError::MissingValue)?,
        tree,
    })
}
