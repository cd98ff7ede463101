//! Dual ascent on the directed cut relaxation of an SAP, and the reductions
//! driven by its reduced costs.
//!
//! Each step picks a terminal that the root cannot yet reach over
//! zero-reduced-cost arcs, takes the set of vertices that reach it over such
//! arcs and raises the dual of that cut by the smallest reduced cost on it.
//! The sum of the raises is a lower bound on every arborescence.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::distance::HeapEntry;
use crate::error::SapError;
use crate::events::{delete_edge, delete_vertex, fix_terminal, ReductionEvent, Safety};
use crate::model::{exceeds, Cost, PcInstance, ProblemClass, VertexId, INF};
use crate::transform::{transform_pc, transform_rpc, ArcOrigin, SapInstance, SapKind};
use crate::walk::ReachSet;

/// Fixed terminals tried as roots of the rooted transformation.
pub const MAX_ROOTS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct DualAscentResult {
    /// Lower bound on the SAP objective.
    pub lower_bound: Cost,
    pub reduced_costs: Vec<Cost>,
    pub root: usize,
}

impl DualAscentResult {
    /// Lower bound in the objective of the instance the SAP was built from,
    /// offset included.
    pub fn instance_bound(&self, sap: &SapInstance, inst: &PcInstance) -> Cost {
        sap.to_instance_objective(self.lower_bound) + inst.offset()
    }
}

/// Vertices reaching `t` over zero-reduced-cost arcs, or `None` when the
/// root is among them.
fn zero_component(
    sap: &SapInstance,
    rc: &[Cost],
    t: usize,
    mark: &mut [u32],
    stamp: u32,
) -> Option<Vec<usize>> {
    let mut comp = vec![t];
    mark[t] = stamp;
    let mut i = 0;
    while i < comp.len() {
        let x = comp[i];
        i += 1;
        for &a in sap.in_arcs(x) {
            if rc[a] > 0.0 {
                continue;
            }
            let y = sap.arc(a).tail;
            if mark[y] != stamp {
                if y == sap.root() {
                    return None;
                }
                mark[y] = stamp;
                comp.push(y);
            }
        }
    }
    Some(comp)
}

/// Wong's dual ascent. Active terminals are taken smallest cut first (cut
/// sizes are refreshed lazily when a terminal is taken from the queue),
/// ties by id.
pub fn dual_ascent(sap: &SapInstance) -> Result<DualAscentResult, SapError> {
    let n = sap.vertex_count();
    // feasibility: the root reaches every terminal
    let mut seen = vec![false; n];
    seen[sap.root()] = true;
    let mut stack = vec![sap.root()];
    while let Some(x) = stack.pop() {
        for &a in sap.out_arcs(x) {
            let y = sap.arc(a).head;
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if let Some(t) = sap.terminals().into_iter().find(|&t| !seen[t]) {
        return Err(SapError::Unreachable(t));
    }

    let mut rc: Vec<Cost> = sap.arcs().iter().map(|a| a.cost).collect();
    let mut lower_bound = 0.0;
    let mut mark = vec![0u32; n];
    let mut stamp = 0u32;
    let mut queue: BinaryHeap<Reverse<(usize, usize)>> = sap
        .terminals()
        .into_iter()
        .filter(|&t| t != sap.root())
        .map(|t| Reverse((0, t)))
        .collect();
    let mut cut = Vec::new();
    while let Some(Reverse((size, t))) = queue.pop() {
        stamp += 1;
        let Some(comp) = zero_component(sap, &rc, t, &mut mark, stamp) else {
            continue;
        };
        cut.clear();
        for &x in &comp {
            for &a in sap.in_arcs(x) {
                if mark[sap.arc(a).tail] != stamp {
                    cut.push(a);
                }
            }
        }
        if let Some(&Reverse((next, _))) = queue.peek() {
            if cut.len() > next.max(size) {
                queue.push(Reverse((cut.len(), t)));
                continue;
            }
        }
        let delta = cut.iter().map(|&a| rc[a]).fold(INF, Cost::min);
        debug_assert!(delta > 0.0 && delta < INF);
        lower_bound += delta;
        for &a in &cut {
            rc[a] = if rc[a] == delta {
                0.0
            } else {
                (rc[a] - delta).max(0.0)
            };
        }
        queue.push(Reverse((cut.len(), t)));
    }
    Ok(DualAscentResult {
        lower_bound,
        reduced_costs: rc,
        root: sap.root(),
    })
}

/// Shortest reduced-cost distances from the root and to the nearest
/// terminal other than the root.
pub fn reduced_cost_distances(sap: &SapInstance, rc: &[Cost]) -> (Vec<Cost>, Vec<Cost>) {
    let n = sap.vertex_count();
    let mut from_root = vec![INF; n];
    let mut heap = BinaryHeap::new();
    from_root[sap.root()] = 0.0;
    heap.push(HeapEntry {
        key: 0.0,
        tie: sap.root(),
        item: sap.root(),
    });
    while let Some(HeapEntry { key, item: x, .. }) = heap.pop() {
        if key > from_root[x] {
            continue;
        }
        for &a in sap.out_arcs(x) {
            let y = sap.arc(a).head;
            let nd = key + rc[a];
            if nd < from_root[y] {
                from_root[y] = nd;
                heap.push(HeapEntry {
                    key: nd,
                    tie: y,
                    item: y,
                });
            }
        }
    }
    let mut to_terminal = vec![INF; n];
    for t in sap.terminals() {
        if t != sap.root() {
            to_terminal[t] = 0.0;
            heap.push(HeapEntry {
                key: 0.0,
                tie: t,
                item: t,
            });
        }
    }
    while let Some(HeapEntry { key, item: x, .. }) = heap.pop() {
        if key > to_terminal[x] {
            continue;
        }
        for &a in sap.in_arcs(x) {
            let y = sap.arc(a).tail;
            let nd = key + rc[a];
            if nd < to_terminal[y] {
                to_terminal[y] = nd;
                heap.push(HeapEntry {
                    key: nd,
                    tie: y,
                    item: y,
                });
            }
        }
    }
    (from_root, to_terminal)
}

/// The transformations used for bounding: the unrooted one for instances
/// without fixed terminals, otherwise the rooted one for up to
/// [`MAX_ROOTS`] fixed terminals (highest degree first, ties by id), each
/// serving as both root and prize-arc source.
pub fn bounding_transforms(inst: &PcInstance) -> Result<Vec<SapInstance>, SapError> {
    if inst.class() == ProblemClass::Pc {
        return Ok(vec![transform_pc(inst)?]);
    }
    let mut fixed = inst.fixed_terminals();
    if fixed.is_empty() {
        return Err(SapError::NoTerminals);
    }
    fixed.sort_by_key(|&t| (Reverse(inst.degree(t)), t));
    fixed.truncate(MAX_ROOTS);
    fixed
        .into_iter()
        .map(|t| transform_rpc(inst, t, t))
        .collect()
}

/// Dual ascent over every bounding transformation.
pub fn dual_ascent_all(
    inst: &PcInstance,
) -> Result<Vec<(SapInstance, DualAscentResult)>, SapError> {
    bounding_transforms(inst)?
        .into_iter()
        .map(|sap| dual_ascent(&sap).map(|r| (sap, r)))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DaReductions {
    pub events: Vec<ReductionEvent>,
    /// Terminals fixed by the reduced-cost test or by the implication
    /// cascade, in fixing order.
    pub fixed: Vec<VertexId>,
}

/// Reductions from one dual-ascent run; `upper_bound` is in instance units
/// with the offset included.
///
/// Terminals are fixed first: `t` is fixed when the reduced costs of the
/// prize arcs of `t` and of every terminal implying `t` (per `reach_sets`)
/// together with the lower bound exceed the upper bound. Each fixed
/// terminal also fixes every terminal whose reach set contains it. Then
/// vertices and edges are deleted when every arborescence through them has
/// a reduced-cost bound above the upper bound.
pub fn da_reductions(
    inst: &mut PcInstance,
    sap: &SapInstance,
    result: &DualAscentResult,
    upper_bound: Cost,
    reach_sets: &[ReachSet],
) -> DaReductions {
    let mut out = DaReductions::default();
    if upper_bound == INF {
        return out;
    }
    let limit = upper_bound - inst.offset() + sap.big_m();
    let rc = &result.reduced_costs;
    let lb = result.lower_bound;
    let by_source: BTreeMap<VertexId, &ReachSet> =
        reach_sets.iter().map(|r| (r.source(), r)).collect();

    let mut newly = Vec::new();
    for t in inst.potential_terminals() {
        let Some(own) = sap.prize_arc(t) else {
            continue;
        };
        let mut sum = rc[own];
        if let Some(reach) = by_source.get(&t) {
            for m in reach.members() {
                if inst.is_potential_terminal(m) {
                    if let Some(a) = sap.prize_arc(m) {
                        sum += rc[a];
                    }
                }
            }
        }
        if exceeds(sum + lb, limit) {
            newly.push(t);
        }
    }
    for &t in &newly {
        if !inst.is_fixed(t) {
            out.events.push(fix_terminal(inst, t, Safety::AllOptima));
            out.fixed.push(t);
        }
    }
    cascade(inst, reach_sets, &mut out);

    let (from_root, to_terminal) = reduced_cost_distances(sap, rc);
    for v in inst.vertices().collect::<Vec<_>>() {
        if inst.is_fixed(v) || inst.vertex_count() <= 1 {
            continue;
        }
        let Some(x) = sap.sap_vertex(v) else { continue };
        if exceeds(lb + from_root[x] + to_terminal[x], limit) {
            if let Ok(ev) = delete_vertex(inst, v, Safety::AllOptima) {
                out.events.push(ev);
            }
        }
    }
    let mut edge_arcs: BTreeMap<usize, [bool; 2]> = BTreeMap::new();
    for a in 0..sap.arc_count() {
        let (e, dir) = match sap.origin(a) {
            ArcOrigin::Forward(e) => (e, 0),
            ArcOrigin::Backward(e) => (e, 1),
            _ => continue,
        };
        let arc = sap.arc(a);
        let bound = lb + from_root[arc.tail] + rc[a] + to_terminal[arc.head];
        edge_arcs.entry(e).or_insert([false; 2])[dir] = exceeds(bound, limit);
    }
    for (e, [f, b]) in edge_arcs {
        if f && b && inst.is_edge_alive(e) {
            out.events.push(delete_edge(inst, e, Safety::AllOptima));
        }
    }
    out
}

/// Fixes every unfixed terminal whose reach set contains a fixed terminal,
/// until nothing changes.
pub fn cascade(inst: &mut PcInstance, reach_sets: &[ReachSet], out: &mut DaReductions) {
    loop {
        let mut changed = false;
        for reach in reach_sets {
            let t = reach.source();
            if !inst.is_alive(t) || !inst.is_potential_terminal(t) {
                continue;
            }
            if reach
                .members()
                .any(|m| inst.is_alive(m) && inst.is_fixed(m))
            {
                out.events.push(fix_terminal(inst, t, Safety::AllOptima));
                out.fixed.push(t);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Best lower bound over all bounding transformations, in instance units
/// with the offset included. Infeasible instances get [`INF`].
pub fn best_lower_bound(runs: &[(SapInstance, DualAscentResult)], inst: &PcInstance) -> Cost {
    runs.iter()
        .map(|(sap, r)| r.instance_bound(sap, inst))
        .fold(Cost::NEG_INFINITY, Cost::max)
}

/// Whether `kind` is the unrooted transformation.
pub fn is_unrooted(kind: SapKind) -> bool {
    matches!(kind, SapKind::Pc { .. })
}
