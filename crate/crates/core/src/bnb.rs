//! Branch-and-bound on vertices: one child fixes the branching vertex as a
//! terminal, the other deletes it. Every node is reduced and bounded by
//! dual ascent; nodes are explored best bound first.

use alloc::collections::{BTreeSet, BinaryHeap};
use core::cmp::{Ordering, Reverse};

use crate::distance::induced_mst;
use crate::events::EventLog;
use crate::model::{Cost, PcInstance, SteinerTree, VertexId, EPS, INF};
use crate::reduce::{instance_lower_bound, ReduceConfig, ReductionState};

#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    /// Relative gap at which the search stops.
    pub gap: Cost,
    pub node_limit: Option<usize>,
    /// Reductions before branching.
    pub root_reduce: ReduceConfig,
    /// Reductions at every other node.
    pub node_reduce: ReduceConfig,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            gap: 1e-6,
            node_limit: None,
            root_reduce: ReduceConfig::default(),
            node_reduce: ReduceConfig::light(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub nodes: usize,
    pub max_depth: usize,
    /// Events of the root reduction, per kind.
    pub root_events: [usize; 6],
    /// Events of all other node reductions, per kind.
    pub node_events: [usize; 6],
    pub vertices_before: usize,
    pub edges_before: usize,
    /// Size of the instance after the root reduction.
    pub vertices_after: usize,
    pub edges_after: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    /// Best tree found, on the input instance; `None` if none was found.
    pub tree: Option<SteinerTree>,
    pub lower_bound: Cost,
    pub upper_bound: Cost,
    pub optimal: bool,
    pub stats: SolveStats,
}

struct Node {
    instance: PcInstance,
    log: EventLog,
    lower_bound: Cost,
    depth: usize,
    id: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // max-heap order: smallest bound, then deepest, then oldest
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lower_bound
            .total_cmp(&self.lower_bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

fn fixed_terminals_connected(inst: &PcInstance) -> bool {
    let fixed = inst.fixed_terminals();
    let Some(&first) = fixed.first() else {
        return true;
    };
    let comps = inst.components();
    let comp = comps.iter().find(|c| c.contains(&first)).unwrap();
    fixed.iter().all(|t| comp.binary_search(t).is_ok())
}

/// Branching vertex: the unfixed potential terminal maximising
/// `p(v)·(1 + deg(v))`, otherwise the unfixed vertex of largest degree;
/// ties by smallest id.
pub fn branching_vertex(inst: &PcInstance) -> Option<VertexId> {
    let open = inst.potential_terminals();
    if !open.is_empty() {
        let score = |v: VertexId| inst.prize(v) * (1 + inst.degree(v)) as Cost;
        return open
            .into_iter()
            .min_by(|&a, &b| score(b).total_cmp(&score(a)).then(a.cmp(&b)));
    }
    inst.vertices()
        .filter(|&v| !inst.is_fixed(v))
        .min_by_key(|&v| (Reverse(inst.degree(v)), v))
}

/// Solves `original` exactly, or up to the limits; `stop` is polled before
/// every node.
pub fn solve(original: &PcInstance, config: &SolveConfig, stop: &dyn Fn() -> bool) -> SolveResult {
    let mut stats = SolveStats {
        vertices_before: original.vertex_count(),
        edges_before: original.edge_count(),
        ..SolveStats::default()
    };
    let mut root = ReductionState::new(original);
    root.run(&config.root_reduce);
    stats.root_events = root.log.counts();
    stats.vertices_after = root.instance.vertex_count();
    stats.edges_after = root.instance.edge_count();
    let mut upper = root.upper_bound;
    let mut incumbent = root.incumbent.clone();

    let mut heap = BinaryHeap::new();
    let mut next_id = 0;
    heap.push(Node {
        lower_bound: root.lower_bound,
        instance: root.instance,
        log: root.log,
        depth: 0,
        id: next_id,
    });
    next_id += 1;
    let mut interrupted = false;
    let mut global_lower = Cost::NEG_INFINITY;

    while let Some(node) = heap.pop() {
        let prune_at = upper - EPS;
        if node.lower_bound >= prune_at {
            heap.clear();
            break;
        }
        if upper < INF && node.lower_bound >= upper - config.gap * upper.abs().max(1.0) {
            global_lower = node.lower_bound;
            heap.clear();
            break;
        }
        if stop() || config.node_limit.is_some_and(|l| stats.nodes >= l) {
            interrupted = true;
            global_lower = node.lower_bound;
            heap.push(node);
            break;
        }
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(node.depth);

        let mut state = ReductionState {
            original,
            instance: node.instance,
            log: node.log,
            upper_bound: upper,
            incumbent: incumbent.clone(),
            lower_bound: node.lower_bound,
        };
        if node.id != 0 {
            let before = state.log.counts();
            state.run(&config.node_reduce);
            let after = state.log.counts();
            for k in 0..6 {
                stats.node_events[k] += after[k] - before[k];
            }
        }
        if state.upper_bound < upper {
            upper = state.upper_bound;
            incumbent = state.incumbent.clone();
        }
        if !fixed_terminals_connected(&state.instance) {
            continue;
        }
        let inst = &state.instance;
        if inst.terminals().is_empty() {
            state.offer(&SteinerTree::default());
        } else if inst.vertices().all(|v| inst.is_fixed(v)) {
            let all: BTreeSet<VertexId> = inst.vertices().collect();
            if let Some(tree) = induced_mst(inst, &all) {
                state.offer(&tree);
            }
        } else {
            let lb = state.lower_bound.max(instance_lower_bound(inst));
            if lb < state.upper_bound - EPS {
                if let Some(v) = branching_vertex(inst) {
                    let mut fix = state.instance.clone();
                    fix.fix_terminal(v);
                    heap.push(Node {
                        instance: fix,
                        log: state.log.clone(),
                        lower_bound: lb,
                        depth: node.depth + 1,
                        id: next_id,
                    });
                    let mut del = state.instance.clone();
                    if del.delete_vertex(v).is_ok() {
                        heap.push(Node {
                            instance: del,
                            log: state.log.clone(),
                            lower_bound: lb,
                            depth: node.depth + 1,
                            id: next_id + 1,
                        });
                    }
                    next_id += 2;
                }
            }
        }
        if state.upper_bound < upper {
            upper = state.upper_bound;
            incumbent = state.incumbent.clone();
        }
    }

    let lower_bound = if interrupted {
        heap.iter()
            .map(|n| n.lower_bound)
            .fold(INF, Cost::min)
            .min(upper)
    } else if global_lower > Cost::NEG_INFINITY {
        global_lower.min(upper)
    } else {
        upper
    };
    let optimal = !interrupted && incumbent.is_some();
    SolveResult {
        tree: incumbent,
        lower_bound,
        upper_bound: upper,
        optimal,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate_cost, InstanceBuilder};

    fn never() -> bool {
        false
    }

    #[test]
    fn fig2_optimum() {
        let mut b = InstanceBuilder::new(4);
        b.edge(0, 1, 0.6)
            .edge(1, 2, 1.5)
            .edge(2, 3, 1.1)
            .prize(0, 7.0)
            .prize(3, 2.5);
        let inst = b.build().unwrap();
        let r = solve(&inst, &SolveConfig::default(), &never);
        assert!(r.optimal);
        assert_eq!(r.upper_bound, 2.5);
        let tree = r.tree.unwrap();
        assert_eq!(tree, SteinerTree::single(0));
        assert_eq!(evaluate_cost(&inst, &tree).unwrap(), 2.5);
    }

    #[test]
    fn node_limit_reports_bounds() {
        let mut b = InstanceBuilder::new(7);
        b.edge(0, 2, 1.0).edge(0, 6, 1.0).edge(0, 4, 1.0);
        b.edge(2, 3, 2.0)
            .edge(3, 4, 2.0)
            .edge(4, 5, 2.0)
            .edge(5, 6, 2.0)
            .edge(1, 2, 2.0)
            .edge(1, 6, 2.0);
        for v in [0, 1, 3, 5] {
            b.prize(v, 4.0);
        }
        b.prize(4, 0.5);
        let inst = b.build().unwrap();
        let r = solve(&inst, &SolveConfig::default(), &never);
        assert!(r.optimal);
        assert_eq!(r.upper_bound, 8.0);
        let cfg = SolveConfig {
            node_limit: Some(0),
            ..SolveConfig::default()
        };
        let limited = solve(&inst, &cfg, &never);
        assert!(limited.lower_bound <= 8.0 + 1e-9 && limited.upper_bound >= 8.0 - 1e-9);
    }

    #[test]
    fn branching_prefers_rich_hubs() {
        let mut b = InstanceBuilder::new(4);
        b.edge(0, 1, 1.0)
            .edge(1, 2, 1.0)
            .edge(1, 3, 1.0)
            .prize(0, 3.0)
            .prize(1, 2.0);
        let inst = b.build().unwrap();
        // 3·2 = 6 against 2·4 = 8
        assert_eq!(branching_vertex(&inst), Some(1));
    }
}
