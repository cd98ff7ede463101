//! Reduction events and solution back-mapping.
//!
//! Every structural change made by the reduction engine is recorded as a
//! [`ReductionEvent`]. The log can be replayed on the original instance to
//! rebuild the reduced one, and walked backwards to turn a solution of the
//! reduced instance into a solution of the original.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::distance::DisjointSets;
use crate::error::{LogError, ModelError};
use crate::model::{Cost, EdgeId, PcInstance, SteinerTree, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Safety {
    /// Every optimal solution survives the reduction.
    AllOptima,
    /// At least one optimal solution survives.
    SomeOptimum,
}

/// An edge created by pseudo-elimination, standing for the path through the
/// eliminated vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Replacement {
    pub edge: EdgeId,
    pub u: VertexId,
    pub w: VertexId,
    pub cost: Cost,
    /// The two edges `{u, v}` and `{v, w}` of the eliminated vertex `v`.
    pub parents: [EdgeId; 2],
    /// A more expensive parallel edge deleted in favour of this one.
    pub superseded: Option<EdgeId>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReductionEvent {
    DeleteEdge {
        edge: EdgeId,
        safety: Safety,
    },
    /// Deletes a vertex with its incident edges; its prize moves to the offset.
    DeleteVertex {
        vertex: VertexId,
        prize: Cost,
        safety: Safety,
    },
    FixTerminal {
        vertex: VertexId,
        safety: Safety,
    },
    /// Merges the leaf `removed` into the fixed terminal `kept`; the edge cost
    /// moves to the offset.
    ContractEdge {
        edge: EdgeId,
        kept: VertexId,
        removed: VertexId,
        cost: Cost,
    },
    /// Removes a zero-prize vertex and joins each pair of its neighbours.
    PseudoEliminate {
        vertex: VertexId,
        replacements: Vec<Replacement>,
        safety: Safety,
    },
    OffsetAdd {
        amount: Cost,
    },
}

impl ReductionEvent {
    pub fn kind(&self) -> EventKind {
        match self {
            Self::DeleteEdge { .. } => EventKind::DeleteEdge,
            Self::DeleteVertex { .. } => EventKind::DeleteVertex,
            Self::FixTerminal { .. } => EventKind::FixTerminal,
            Self::ContractEdge { .. } => EventKind::ContractEdge,
            Self::PseudoEliminate { .. } => EventKind::PseudoEliminate,
            Self::OffsetAdd { .. } => EventKind::OffsetAdd,
        }
    }

    pub fn safety(&self) -> Safety {
        match self {
            Self::DeleteEdge { safety, .. }
            | Self::DeleteVertex { safety, .. }
            | Self::FixTerminal { safety, .. }
            | Self::PseudoEliminate { safety, .. } => *safety,
            Self::ContractEdge { .. } | Self::OffsetAdd { .. } => Safety::AllOptima,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    DeleteEdge,
    DeleteVertex,
    FixTerminal,
    ContractEdge,
    PseudoEliminate,
    OffsetAdd,
}

impl EventKind {
    pub const ALL: [EventKind; 6] = [
        EventKind::DeleteEdge,
        EventKind::DeleteVertex,
        EventKind::FixTerminal,
        EventKind::ContractEdge,
        EventKind::PseudoEliminate,
        EventKind::OffsetAdd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::DeleteEdge => "delete-edge",
            EventKind::DeleteVertex => "delete-vertex",
            EventKind::FixTerminal => "fix-terminal",
            EventKind::ContractEdge => "contract-edge",
            EventKind::PseudoEliminate => "pseudo-eliminate",
            EventKind::OffsetAdd => "offset-add",
        }
    }
}

// ---------------------------------------------------------------------------
// instance mutations that produce events

pub fn delete_edge(inst: &mut PcInstance, edge: EdgeId, safety: Safety) -> ReductionEvent {
    inst.delete_edge(edge);
    ReductionEvent::DeleteEdge { edge, safety }
}

pub fn delete_vertex(
    inst: &mut PcInstance,
    vertex: VertexId,
    safety: Safety,
) -> Result<ReductionEvent, ModelError> {
    let prize = inst.prize(vertex);
    inst.delete_vertex(vertex)?;
    Ok(ReductionEvent::DeleteVertex {
        vertex,
        prize,
        safety,
    })
}

pub fn fix_terminal(inst: &mut PcInstance, vertex: VertexId, safety: Safety) -> ReductionEvent {
    inst.fix_terminal(vertex);
    ReductionEvent::FixTerminal { vertex, safety }
}

/// Contracts the leaf `removed` into its only neighbour `kept`, which must be
/// a fixed terminal.
pub fn contract_leaf(inst: &mut PcInstance, kept: VertexId, removed: VertexId) -> ReductionEvent {
    let (_, edge) = inst.neighbors(removed)[0];
    let cost = inst.cost(edge);
    inst.delete_edge(edge);
    inst.add_offset(cost);
    inst.retire_vertex(removed);
    ReductionEvent::ContractEdge {
        edge,
        kept,
        removed,
        cost,
    }
}

/// Replaces the zero-prize vertex `v` by edges between all pairs of its
/// neighbours, each costing the sum of the two edges it bypasses.
pub fn pseudo_eliminate(inst: &mut PcInstance, vertex: VertexId, safety: Safety) -> ReductionEvent {
    debug_assert!(!inst.is_terminal(vertex));
    let mut nb: Vec<(VertexId, EdgeId)> = inst.neighbors(vertex).to_vec();
    nb.sort_unstable();
    let incident: Vec<EdgeId> = nb.iter().map(|&(_, e)| e).collect();
    for &e in &incident {
        inst.delete_edge(e);
    }
    let mut replacements = Vec::new();
    for i in 0..nb.len() {
        for j in i + 1..nb.len() {
            let (u, eu) = nb[i];
            let (w, ew) = nb[j];
            let cost = inst.cost(eu) + inst.cost(ew);
            if let (Some(edge), superseded) = inst.add_edge(u, w, cost) {
                replacements.push(Replacement {
                    edge,
                    u,
                    w,
                    cost,
                    parents: [eu, ew],
                    superseded,
                });
            }
        }
    }
    inst.retire_vertex(vertex);
    ReductionEvent::PseudoEliminate {
        vertex,
        replacements,
        safety,
    }
}

// ---------------------------------------------------------------------------

/// Ordered reduction events together with a fingerprint of the instance they
/// were recorded on.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EventLog {
    pub fingerprint: u64,
    pub events: Vec<ReductionEvent>,
}

impl EventLog {
    pub fn new(original: &PcInstance) -> Self {
        Self {
            fingerprint: fingerprint(original),
            events: Vec::new(),
        }
    }

    pub fn push(&mut self, event: ReductionEvent) {
        self.events.push(event);
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn extend(&mut self, events: impl IntoIterator<Item = ReductionEvent>) {
        self.events.extend(events);
    }

    /// Number of events per kind, in [`EventKind::ALL`] order.
    pub fn counts(&self) -> [usize; 6] {
        let mut out = [0; 6];
        for ev in &self.events {
            out[ev.kind() as usize] += 1;
        }
        out
    }

    /// Re-applies the log to the instance it was recorded on.
    pub fn replay(&self, original: &PcInstance) -> Result<PcInstance, LogError> {
        let mut inst = original.clone();
        for ev in &self.events {
            match ev {
                ReductionEvent::DeleteEdge { edge, .. } => {
                    check_edge(&inst, *edge)?;
                    inst.delete_edge(*edge);
                }
                ReductionEvent::DeleteVertex { vertex, .. } => {
                    inst.delete_vertex(*vertex)?;
                }
                ReductionEvent::FixTerminal { vertex, .. } => {
                    check_vertex(&inst, *vertex)?;
                    inst.fix_terminal(*vertex);
                }
                ReductionEvent::ContractEdge {
                    edge,
                    kept,
                    removed,
                    ..
                } => {
                    check_edge(&inst, *edge)?;
                    let redo = contract_leaf(&mut inst, *kept, *removed);
                    if &redo != ev {
                        return Err(LogError::UnknownEdge(*edge));
                    }
                }
                ReductionEvent::PseudoEliminate { vertex, safety, .. } => {
                    check_vertex(&inst, *vertex)?;
                    let redo = pseudo_eliminate(&mut inst, *vertex, *safety);
                    if &redo != ev {
                        return Err(LogError::Model(ModelError::UnknownVertex(*vertex)));
                    }
                }
                ReductionEvent::OffsetAdd { amount } => inst.add_offset(*amount),
            }
        }
        inst.refresh_class();
        Ok(inst)
    }
}

fn check_edge(inst: &PcInstance, e: EdgeId) -> Result<(), LogError> {
    if e >= inst.edge_capacity() || !inst.is_edge_alive(e) {
        return Err(LogError::UnknownEdge(e));
    }
    Ok(())
}

fn check_vertex(inst: &PcInstance, v: VertexId) -> Result<(), LogError> {
    if v >= inst.vertex_capacity() || !inst.is_alive(v) {
        return Err(LogError::Model(ModelError::UnknownVertex(v)));
    }
    Ok(())
}

/// Maps a tree of the reduced instance back through `log` onto the original
/// instance. Replacement edges expand into their two parents and contracted
/// leaves reappear. When several replacement edges of the same eliminated
/// vertex are used the expansion can close a cycle; the most expensive edges
/// on such cycles are dropped, so the result never costs more than the input.
pub fn retransform_solution(
    log: &EventLog,
    original: &PcInstance,
    tree: &SteinerTree,
) -> Result<SteinerTree, ModelError> {
    let mut vertices = tree.vertices.clone();
    let mut edges = tree.edges.clone();
    let mut needs_spanning = false;
    for ev in log.events.iter().rev() {
        match ev {
            ReductionEvent::PseudoEliminate {
                vertex,
                replacements,
                ..
            } => {
                let mut used = 0;
                for r in replacements {
                    if edges.remove(&r.edge) {
                        used += 1;
                        edges.insert(r.parents[0]);
                        edges.insert(r.parents[1]);
                    }
                }
                if used > 0 {
                    vertices.insert(*vertex);
                }
                if used > 1 {
                    needs_spanning = true;
                }
            }
            ReductionEvent::ContractEdge {
                edge,
                kept,
                removed,
                ..
            } => {
                if vertices.contains(kept) {
                    vertices.insert(*removed);
                    edges.insert(*edge);
                }
            }
            _ => {}
        }
    }
    if needs_spanning {
        edges = spanning_subset(original, &vertices, &edges);
    }
    let out = SteinerTree { vertices, edges };
    out.validate(original)?;
    Ok(out)
}

/// Minimum spanning forest of the given edge set.
fn spanning_subset(
    inst: &PcInstance,
    vertices: &BTreeSet<VertexId>,
    edges: &BTreeSet<EdgeId>,
) -> BTreeSet<EdgeId> {
    let index: Vec<VertexId> = vertices.iter().copied().collect();
    let pos = |v: VertexId| index.binary_search(&v).ok();
    let mut sorted: Vec<EdgeId> = edges.iter().copied().collect();
    sorted.sort_by(|&a, &b| inst.cost(a).total_cmp(&inst.cost(b)).then(a.cmp(&b)));
    let mut dsu = DisjointSets::new(index.len());
    let mut out = BTreeSet::new();
    for e in sorted {
        let ed = inst.edge(e);
        match (pos(ed.u), pos(ed.v)) {
            (Some(a), Some(b)) => {
                if dsu.union(a, b) {
                    out.insert(e);
                }
            }
            // dangling edges are left for validation to report
            _ => {
                out.insert(e);
            }
        }
    }
    out
}

/// FNV-1a hash over vertex count, prizes, fixed flags, offset and edges.
pub fn fingerprint(inst: &PcInstance) -> u64 {
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    feed(inst.vertex_count() as u64);
    for v in inst.vertices() {
        feed(v as u64);
        feed(inst.prize(v).to_bits());
        feed(inst.is_fixed(v) as u64);
    }
    feed(inst.offset().to_bits());
    for e in inst.edge_ids() {
        let ed = inst.edge(e);
        feed(ed.u as u64);
        feed(ed.v as u64);
        feed(ed.cost.to_bits());
    }
    h
}
