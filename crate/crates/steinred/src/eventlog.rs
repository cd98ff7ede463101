//! Line-oriented text form of an [`EventLog`].
//!
//! The first line is `fingerprint <hex>`. Every event is one line
//! `<kind> <ids...> <cost>`, where the cost is the prize or edge cost the
//! event moves (absent when it moves none), followed by the safety tag
//! `all` (every optimum survives) or `some` (one optimum survives) where the
//! event carries one. A pseudo-elimination is followed by one
//! `replace <edge> <u> <w> <parent> <parent> <superseded> <cost>` line per
//! created edge, `-` standing for no superseded edge. Vertex and edge ids
//! are 1-based, edges numbered in order of creation.
//!
//! ```text
//! fingerprint 9c1d3f0a5b7e2468
//! delete-edge 4 all
//! delete-vertex 7 0 all
//! pseudo-eliminate 3 1 all
//! replace 10 2 5 3 6 - 4.5
//! contract-edge 1 1 2 3
//! offset-add 2.5
//! ```

use std::fmt::Write as _;

use steinred_core::events::Replacement;
use steinred_core::{Cost, EventLog, ReductionEvent, Safety};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EventLogError {
    #[error("missing fingerprint line")]
    MissingFingerprint,
    #[error("{what} at line {line}")]
    Line { line: usize, what: String },
}

fn safety(s: Safety) -> &'static str {
    match s {
        Safety::AllOptima => "all",
        Safety::SomeOptimum => "some",
    }
}

pub fn write_event_log(log: &EventLog) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "fingerprint {:016x}", log.fingerprint);
    for ev in &log.events {
        let name = ev.kind().name();
        let _ = match ev {
            ReductionEvent::DeleteEdge { edge, safety: s } => {
                writeln!(out, "{name} {} {}", edge + 1, safety(*s))
            }
            ReductionEvent::DeleteVertex {
                vertex,
                prize,
                safety: s,
            } => {
                writeln!(out, "{name} {} {prize} {}", vertex + 1, safety(*s))
            }
            ReductionEvent::FixTerminal { vertex, safety: s } => {
                writeln!(out, "{name} {} {}", vertex + 1, safety(*s))
            }
            ReductionEvent::ContractEdge {
                edge,
                kept,
                removed,
                cost,
            } => {
                writeln!(
                    out,
                    "{name} {} {} {} {cost}",
                    edge + 1,
                    kept + 1,
                    removed + 1
                )
            }
            ReductionEvent::PseudoEliminate {
                vertex,
                replacements,
                safety: s,
            } => {
                let _ = writeln!(
                    out,
                    "{name} {} {} {}",
                    vertex + 1,
                    replacements.len(),
                    safety(*s)
                );
                for r in replacements {
                    let superseded = r
                        .superseded
                        .map_or("-".to_string(), |e| (e + 1).to_string());
                    let _ = writeln!(
                        out,
                        "replace {} {} {} {} {} {superseded} {}",
                        r.edge + 1,
                        r.u + 1,
                        r.w + 1,
                        r.parents[0] + 1,
                        r.parents[1] + 1,
                        r.cost
                    );
                }
                Ok(())
            }
            ReductionEvent::OffsetAdd { amount } => writeln!(out, "{name} {amount}"),
        };
    }
    out
}

struct Fields<'a> {
    line: usize,
    words: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn error(&self, what: impl Into<String>) -> EventLogError {
        EventLogError::Line {
            line: self.line,
            what: what.into(),
        }
    }

    fn word(&mut self, what: &str) -> Result<&'a str, EventLogError> {
        let line = self.line;
        self.words.next().ok_or(EventLogError::Line {
            line,
            what: format!("missing {what}"),
        })
    }

    fn id(&mut self, what: &str) -> Result<usize, EventLogError> {
        let token = self.word(what)?;
        match token.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(self.error(format!("invalid {what} '{token}'"))),
        }
    }

    fn count(&mut self) -> Result<usize, EventLogError> {
        let token = self.word("replacement count")?;
        token
            .parse()
            .map_err(|_| self.error(format!("invalid replacement count '{token}'")))
    }

    fn cost(&mut self, what: &str) -> Result<Cost, EventLogError> {
        let token = self.word(what)?;
        token
            .parse()
            .map_err(|_| self.error(format!("invalid {what} '{token}'")))
    }

    fn safety(&mut self) -> Result<Safety, EventLogError> {
        match self.word("safety tag")? {
            "all" => Ok(Safety::AllOptima),
            "some" => Ok(Safety::SomeOptimum),
            other => Err(self.error(format!("invalid safety tag '{other}'"))),
        }
    }

    fn optional_id(&mut self, what: &str) -> Result<Option<usize>, EventLogError> {
        let token = self.word(what)?;
        if token == "-" {
            return Ok(None);
        }
        match token.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(Some(i - 1)),
            _ => Err(self.error(format!("invalid {what} '{token}'"))),
        }
    }
}

pub fn parse_event_log(text: &str) -> Result<EventLog, EventLogError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (no, first) = lines.next().ok_or(EventLogError::MissingFingerprint)?;
    let hex = first
        .strip_prefix("fingerprint ")
        .ok_or(EventLogError::MissingFingerprint)?;
    let fingerprint = u64::from_str_radix(hex.trim(), 16).map_err(|_| EventLogError::Line {
        line: no,
        what: format!("invalid fingerprint '{hex}'"),
    })?;
    let mut log = EventLog {
        fingerprint,
        events: Vec::new(),
    };
    while let Some((line, text)) = lines.next() {
        let mut words = text.split_whitespace();
        let kind = words.next().unwrap_or_default();
        let mut f = Fields { line, words };
        let ev = match kind {
            "delete-edge" => ReductionEvent::DeleteEdge {
                edge: f.id("edge")?,
                safety: f.safety()?,
            },
            "delete-vertex" => ReductionEvent::DeleteVertex {
                vertex: f.id("vertex")?,
                prize: f.cost("prize")?,
                safety: f.safety()?,
            },
            "fix-terminal" => ReductionEvent::FixTerminal {
                vertex: f.id("vertex")?,
                safety: f.safety()?,
            },
            "contract-edge" => ReductionEvent::ContractEdge {
                edge: f.id("edge")?,
                kept: f.id("vertex")?,
                removed: f.id("vertex")?,
                cost: f.cost("cost")?,
            },
            "pseudo-eliminate" => {
                let vertex = f.id("vertex")?;
                let count = f.count()?;
                let safety = f.safety()?;
                let mut replacements = Vec::with_capacity(count);
                for _ in 0..count {
                    let (line, text) = lines
                        .next()
                        .ok_or_else(|| f.error("missing replace line"))?;
                    let mut r = Fields {
                        line,
                        words: text.split_whitespace(),
                    };
                    if r.word("keyword")? != "replace" {
                        return Err(r.error("expected a replace line"));
                    }
                    replacements.push(Replacement {
                        edge: r.id("edge")?,
                        u: r.id("vertex")?,
                        w: r.id("vertex")?,
                        parents: [r.id("edge")?, r.id("edge")?],
                        superseded: r.optional_id("edge")?,
                        cost: r.cost("cost")?,
                    });
                }
                ReductionEvent::PseudoEliminate {
                    vertex,
                    replacements,
                    safety,
                }
            }
            "offset-add" => ReductionEvent::OffsetAdd {
                amount: f.cost("amount")?,
            },
            other => return Err(f.error(format!("unknown event '{other}'"))),
        };
        if f.words.next().is_some() {
            return Err(f.error("trailing fields"));
        }
        log.push(ev);
    }
    Ok(log)
}
