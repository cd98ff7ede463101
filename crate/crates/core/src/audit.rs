//! Re-verification of walk witnesses (enabled by the `audit` feature).
//!
//! Every finite bound returned by the walk searches is recomputed here from
//! its witness walk with a direct quadratic evaluation that shares no code
//! with [`prize_constrained_length`](crate::walk::prize_constrained_length).
//! Checks and failures are counted in process-wide counters.

use core::sync::atomic::{AtomicUsize, Ordering};

use crate::model::{Cost, EdgeId, PcInstance, VertexId};
use crate::walk::{validate_walk, PcWalk, ReachSet};

static CHECKED: AtomicUsize = AtomicUsize::new(0);
static FAILED: AtomicUsize = AtomicUsize::new(0);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AuditCounts {
    pub checked: usize,
    pub failed: usize,
}

pub fn counts() -> AuditCounts {
    AuditCounts {
        checked: CHECKED.load(Ordering::Relaxed),
        failed: FAILED.load(Ordering::Relaxed),
    }
}

fn record(ok: bool) {
    CHECKED.fetch_add(1, Ordering::Relaxed);
    if !ok {
        FAILED.fetch_add(1, Ordering::Relaxed);
    }
}

fn subwalk_cost(inst: &PcInstance, walk: &PcWalk, k: usize, l: usize) -> Cost {
    let mut c = 0.0;
    for i in k..l {
        c += inst.cost(walk.edges[i]);
    }
    for i in k + 1..l {
        c -= inst.effective_prize(walk.vertices[i]);
    }
    c
}

fn is_breakpoint(inst: &PcInstance, walk: &PcWalk, i: usize) -> bool {
    i == 0 || i + 1 == walk.vertices.len() || inst.is_terminal(walk.vertices[i])
}

/// Maximum subwalk cost over all breakpoint pairs.
pub fn naive_length(inst: &PcInstance, walk: &PcWalk) -> Cost {
    let r = walk.vertices.len();
    let mut best = 0.0;
    for k in 0..r {
        for l in k..r {
            if is_breakpoint(inst, walk, k) && is_breakpoint(inst, walk, l) {
                let c = subwalk_cost(inst, walk, k, l);
                if c > best {
                    best = c;
                }
            }
        }
    }
    best
}

/// Maximum prefix cost over prefixes ending at a terminal or the last vertex.
pub fn naive_left_length(inst: &PcInstance, walk: &PcWalk) -> Cost {
    let r = walk.vertices.len();
    let mut best = Cost::NEG_INFINITY;
    for l in 0..r {
        if l + 1 == r || inst.is_terminal(walk.vertices[l]) {
            let c = subwalk_cost(inst, walk, 0, l);
            if c > best {
                best = c;
            }
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn check_distance_witness(
    inst: &PcInstance,
    vi: VertexId,
    vj: VertexId,
    cap: Cost,
    inclusive: bool,
    skip_edge: Option<EdgeId>,
    value: Cost,
    walk: &PcWalk,
) {
    let ends = (walk.first(), walk.last());
    let ok = validate_walk(inst, walk).is_ok()
        && (ends == (Some(vi), Some(vj)) || ends == (Some(vj), Some(vi)))
        && skip_edge.is_none_or(|e| !walk.edges.contains(&e))
        && naive_length(inst, walk) == value
        && naive_length(inst, &walk.reversed()) == value
        && if inclusive { value <= cap } else { value < cap };
    record(ok);
}

pub(crate) fn check_reach_set(inst: &PcInstance, reach: &ReachSet) {
    for v in reach.members() {
        let ok = match reach.witness(v) {
            Some(walk) => {
                validate_walk(inst, &walk).is_ok()
                    && walk.first() == Some(reach.source())
                    && walk.last() == Some(v)
                    && naive_left_length(inst, &walk) < reach.threshold()
            }
            None => false,
        };
        record(ok);
    }
}

pub(crate) fn check_connection_witness(
    inst: &PcInstance,
    from: VertexId,
    targets: &[bool],
    threshold: Cost,
    walk: &PcWalk,
    left_length: Cost,
) {
    let ok = validate_walk(inst, walk).is_ok()
        && walk.first() == Some(from)
        && walk.last().is_some_and(|t| targets[t])
        && naive_left_length(inst, walk) == left_length
        && left_length <= threshold;
    record(ok);
}
