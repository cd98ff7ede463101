//! SteinLib `.stp` files.
//!
//! The reader understands the `Comment`, `Graph` and `Terminals` sections
//! and skips every other section. `TP i p` lines give vertex `i` prize `p`,
//! `T i` lines make `i` a fixed terminal. Ids are 1-based in the file and
//! 0-based in memory. The instance offset travels as an `Offset` key of the
//! comment section.

use std::fmt::Write as _;

use log::warn;
use steinred_core::{Cost, InstanceBuilder, ModelError, PcInstance, ProblemClass};
use thiserror::Error;

pub const MAGIC: &str = "33D32945 STP File, STP Format Version 1.0";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StpError {
    #[error("missing STP header at line 1")]
    MissingHeader,
    #[error("missing EOF marker")]
    MissingEof,
    #[error("missing graph section")]
    MissingGraph,
    #[error("unterminated section {0}")]
    Unterminated(String),
    #[error("{what} at line {line}")]
    Line { line: usize, what: String },
    #[error("graph declares {declared} {item} but lists {found}")]
    CountMismatch {
        item: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("invalid instance: {0}")]
    Model(#[from] ModelError),
}

fn at(line: usize, what: impl Into<String>) -> StpError {
    StpError::Line {
        line,
        what: what.into(),
    }
}

fn number<T: std::str::FromStr>(
    token: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, StpError> {
    let token = token.ok_or_else(|| at(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| at(line, format!("malformed {what} '{token}'")))
}

fn vertex(token: Option<&str>, line: usize, nodes: Option<usize>) -> Result<usize, StpError> {
    let n = nodes.ok_or_else(|| at(line, "vertex before the Nodes line"))?;
    let id: usize = number(token, line, "vertex id")?;
    if id == 0 || id > n {
        return Err(at(line, format!("vertex id {id} out of range 1..={n}")));
    }
    Ok(id - 1)
}

/// Parses an `.stp` document.
pub fn parse_stp(text: &str) -> Result<PcInstance, StpError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let header = lines.by_ref().find(|(_, l)| !l.is_empty());
    match header {
        Some((_, l))
            if l.split_whitespace()
                .next()
                .is_some_and(|w| w.eq_ignore_ascii_case("33D32945")) => {}
        _ => return Err(StpError::MissingHeader),
    }

    let mut nodes: Option<usize> = None;
    let mut declared_edges: Option<usize> = None;
    let mut declared_terminals: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Cost)> = Vec::new();
    let mut prizes: Vec<(usize, Cost)> = Vec::new();
    let mut fixed: Vec<usize> = Vec::new();
    let mut offset = 0.0;
    let mut section: Option<String> = None;
    let mut seen_graph = false;
    let mut seen_eof = false;

    for (no, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let key = words.next().unwrap_or_default().to_ascii_lowercase();
        let Some(name) = section.clone() else {
            match key.as_str() {
                "section" => {
                    let name = words
                        .next()
                        .ok_or_else(|| at(no, "missing section name"))?
                        .to_ascii_lowercase();
                    seen_graph |= name == "graph";
                    section = Some(name);
                }
                "eof" => {
                    seen_eof = true;
                    break;
                }
                _ => return Err(at(no, format!("unexpected '{line}' outside a section"))),
            }
            continue;
        };
        if key == "end" {
            section = None;
            continue;
        }
        match (name.as_str(), key.as_str()) {
            ("comment", "offset") => offset = number(words.next(), no, "offset")?,
            ("graph", "nodes") => nodes = Some(number(words.next(), no, "node count")?),
            ("graph", "edges") => declared_edges = Some(number(words.next(), no, "edge count")?),
            ("graph", "e") => {
                let u = vertex(words.next(), no, nodes)?;
                let v = vertex(words.next(), no, nodes)?;
                let c: Cost = number(words.next(), no, "edge cost")?;
                if c <= 0.0 || !c.is_finite() {
                    return Err(at(no, "non-positive edge cost"));
                }
                edges.push((u, v, c));
            }
            ("graph", _) => warn!("line {no}: ignoring '{line}'"),
            ("terminals", "terminals") => {
                declared_terminals = Some(number(words.next(), no, "terminal count")?)
            }
            ("terminals", "tp") => {
                let v = vertex(words.next(), no, nodes)?;
                let p: Cost = number(words.next(), no, "prize")?;
                if p < 0.0 || !p.is_finite() {
                    return Err(at(no, "negative prize"));
                }
                prizes.push((v, p));
            }
            ("terminals", "t") => fixed.push(vertex(words.next(), no, nodes)?),
            ("terminals", _) => warn!("line {no}: ignoring '{line}'"),
            _ => {}
        }
    }
    if let Some(name) = section {
        return Err(StpError::Unterminated(name));
    }
    if !seen_eof {
        return Err(StpError::MissingEof);
    }
    if !seen_graph {
        return Err(StpError::MissingGraph);
    }
    let n = nodes.ok_or(StpError::MissingGraph)?;
    if let Some(declared) = declared_edges {
        if declared != edges.len() {
            return Err(StpError::CountMismatch {
                item: "edges",
                declared,
                found: edges.len(),
            });
        }
    }
    if let Some(declared) = declared_terminals {
        let found = prizes.len() + fixed.len();
        if declared != found {
            warn!("terminal section declares {declared} terminals but lists {found}");
        }
    }

    let mut b = InstanceBuilder::new(n);
    for &(u, v, c) in &edges {
        b.edge(u, v, c);
    }
    for &(v, p) in &prizes {
        b.prize(v, p);
    }
    for &v in &fixed {
        b.fixed(v);
    }
    b.offset(offset);
    Ok(b.build()?)
}

fn problem_name(class: ProblemClass) -> &'static str {
    match class {
        ProblemClass::Pc => "Prize-Collecting Steiner Problem in Graphs",
        ProblemClass::Rpc => "Rooted Prize-Collecting Steiner Problem in Graphs",
        ProblemClass::Spg => "Classical Steiner Problem in Graphs",
    }
}

/// Writes `inst` in canonical form. Deleted vertices and edges are dropped
/// and the survivors renumbered in ascending order.
pub fn write_stp(inst: &PcInstance) -> String {
    let (inst, _) = inst.compacted();
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}\n");
    let _ = writeln!(out, "SECTION Comment");
    let _ = writeln!(out, "Problem \"{}\"", problem_name(inst.class()));
    let _ = writeln!(out, "Offset {}", inst.offset());
    let _ = writeln!(out, "END\n");
    let _ = writeln!(out, "SECTION Graph");
    let _ = writeln!(out, "Nodes {}", inst.vertex_count());
    let _ = writeln!(out, "Edges {}", inst.edge_count());
    for e in inst.edge_ids() {
        let ed = inst.edge(e);
        let _ = writeln!(out, "E {} {} {}", ed.u + 1, ed.v + 1, ed.cost);
    }
    let _ = writeln!(out, "END\n");
    let _ = writeln!(out, "SECTION Terminals");
    let _ = writeln!(out, "Terminals {}", inst.terminals().len());
    for v in inst.vertices() {
        if inst.is_fixed(v) {
            let _ = writeln!(out, "T {}", v + 1);
        } else if inst.prize(v) > 0.0 {
            let _ = writeln!(out, "TP {} {}", v + 1, inst.prize(v));
        }
    }
    let _ = writeln!(out, "END\n");
    let _ = writeln!(out, "EOF");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let text = format!("{MAGIC}\nSECTION Graph\nNodes 2\nEdges 1\nE 1 2 5\nEND\nSECTION Terminals\nTP 1 3\nEND\nEOF\n");
        let inst = parse_stp(&text).unwrap();
        assert_eq!(inst.edge_count(), 1);
        assert_eq!(inst.cost(0), 5.0);
        assert_eq!(inst.prize(0), 3.0);
    }

    #[test]
    fn zero_cost_is_rejected_with_its_line() {
        let text = format!("{MAGIC}\nSECTION Graph\nNodes 2\nEdges 1\nE 1 2 0\nEND\nEOF\n");
        let err = parse_stp(&text).unwrap_err();
        assert_eq!(err.to_string(), "non-positive edge cost at line 5");
    }

    #[test]
    fn writer_distinguishes_fixed_terminals() {
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 1.5)
            .edge(1, 2, 2.0)
            .prize(0, 4.0)
            .fixed(2)
            .offset(0.25);
        let inst = b.build().unwrap();
        let text = write_stp(&inst);
        assert!(text.contains("\nT 3\n"));
        assert!(text.contains("\nTP 1 4\n"));
        assert!(text.contains("\nOffset 0.25\n"));
        assert_eq!(parse_stp(&text).unwrap(), inst);
    }
}
