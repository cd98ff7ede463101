//! Primal heuristics: terminal-growth construction along certified
//! connection walks, strong pruning and a small local search.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;

use crate::distance::{induced_mst, HeapEntry};
use crate::error::HeuristicError;
use crate::model::{
    tree_cost_unchecked, Cost, EdgeId, PcInstance, SteinerTree, VertexId, EPS, INF,
};
use crate::walk::{connection_walk, default_edge_budget};

/// Number of construction starts.
pub const DEFAULT_STARTS: usize = 5;

/// Sweeps of the local search.
pub const DEFAULT_IMPROVE_ROUNDS: usize = 10;

/// Grows a tree from `start`. Each round searches, for every terminal
/// outside the tree, a walk into the tree whose left-rooted length is at
/// most the terminal's prize; all qualifying walks are attached in order of
/// their gain (walk cost minus prize). Fixed terminals that never qualify
/// are attached along shortest paths. The result is the pruned minimum
/// spanning tree of the collected vertices.
pub fn construct_tree(
    inst: &PcInstance,
    start: VertexId,
    reach_budget: usize,
) -> Result<SteinerTree, HeuristicError> {
    if start >= inst.vertex_capacity() || !inst.is_alive(start) || !inst.is_terminal(start) {
        return Err(HeuristicError::InvalidStart(start));
    }
    let mut in_tree = vec![false; inst.vertex_capacity()];
    in_tree[start] = true;
    loop {
        let mut candidates = Vec::new();
        for t in inst.terminals() {
            if in_tree[t] {
                continue;
            }
            let threshold = inst.effective_prize(t);
            if let Some((cost, walk)) = connection_walk(inst, t, &in_tree, threshold, reach_budget)
            {
                candidates.push((cost - threshold, t, walk));
            }
        }
        if candidates.is_empty() {
            break;
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, t, walk) in candidates {
            if in_tree[t] {
                continue;
            }
            for &v in &walk.vertices {
                in_tree[v] = true;
            }
        }
    }
    for f in inst.fixed_terminals() {
        if !in_tree[f] {
            attach_shortest_path(inst, &mut in_tree, f)?;
        }
    }
    let vertices: BTreeSet<VertexId> = (0..in_tree.len()).filter(|&v| in_tree[v]).collect();
    let tree = induced_mst(inst, &vertices).ok_or(HeuristicError::Unreachable(start))?;
    Ok(prune(inst, &tree))
}

fn attach_shortest_path(
    inst: &PcInstance,
    in_tree: &mut [bool],
    target: VertexId,
) -> Result<(), HeuristicError> {
    let mut dist = vec![INF; inst.vertex_capacity()];
    let mut pred: Vec<Option<VertexId>> = vec![None; inst.vertex_capacity()];
    let mut heap = BinaryHeap::new();
    for v in inst.vertices().filter(|&v| in_tree[v]) {
        dist[v] = 0.0;
        heap.push(HeapEntry {
            key: 0.0,
            tie: v,
            item: v,
        });
    }
    while let Some(HeapEntry { key, item: v, .. }) = heap.pop() {
        if key > dist[v] {
            continue;
        }
        if v == target {
            break;
        }
        for &(w, e) in inst.neighbors(v) {
            let nd = key + inst.cost(e);
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = Some(v);
                heap.push(HeapEntry {
                    key: nd,
                    tie: w,
                    item: w,
                });
            }
        }
    }
    if dist[target] == INF {
        return Err(HeuristicError::Unreachable(target));
    }
    let mut v = target;
    while !in_tree[v] {
        in_tree[v] = true;
        v = pred[v].unwrap();
    }
    Ok(())
}

fn tree_neighbors<'a>(
    inst: &'a PcInstance,
    tree: &'a SteinerTree,
    v: VertexId,
) -> impl Iterator<Item = (VertexId, EdgeId)> + 'a {
    inst.neighbors(v)
        .iter()
        .copied()
        .filter(move |(_, e)| tree.edges.contains(e))
}

/// Strong pruning of `tree` rooted at `root`: every subtree whose prizes do
/// not pay for the edge attaching it is cut off. Subtrees holding a fixed
/// terminal are always kept.
pub fn strong_prune(inst: &PcInstance, tree: &SteinerTree, root: VertexId) -> SteinerTree {
    let mut order = vec![root];
    let mut parent: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for (w, e) in tree_neighbors(inst, tree, v) {
            if w != root && !parent.contains_key(&w) {
                parent.insert(w, (v, e));
                order.push(w);
            }
        }
    }
    let mut value: BTreeMap<VertexId, Cost> = order
        .iter()
        .map(|&v| (v, inst.effective_prize(v)))
        .collect();
    for &v in order.iter().skip(1).rev() {
        let (p, e) = parent[&v];
        let gain = value[&v] - inst.cost(e);
        if gain > 0.0 {
            *value.get_mut(&p).unwrap() += gain;
        }
    }
    let mut out = SteinerTree::single(root);
    for &v in order.iter().skip(1) {
        let (p, e) = parent[&v];
        if out.vertices.contains(&p) && value[&v] - inst.cost(e) > 0.0 {
            out.vertices.insert(v);
            out.edges.insert(e);
        }
    }
    out
}

fn better(inst: &PcInstance, a: &SteinerTree, b: &SteinerTree) -> bool {
    let (ca, cb) = (tree_cost_unchecked(inst, a), tree_cost_unchecked(inst, b));
    ca < cb - EPS || (ca <= cb + EPS && a.vertices < b.vertices)
}

/// Strong pruning from the best root: the smallest fixed terminal when
/// there is one, otherwise the smallest terminal whose pruned tree keeps
/// the most value. The values of all roots are found in one rerooting pass.
pub fn prune(inst: &PcInstance, tree: &SteinerTree) -> SteinerTree {
    if let Some(&f) = tree.vertices.iter().find(|&&v| inst.is_fixed(v)) {
        return strong_prune(inst, tree, f);
    }
    let Some(&first) = tree.vertices.iter().find(|&&v| inst.is_terminal(v)) else {
        return tree.clone();
    };
    let ids: Vec<VertexId> = tree.vertices.iter().copied().collect();
    let pos = |v: VertexId| ids.binary_search(&v).unwrap();
    let mut adj: Vec<Vec<(usize, Cost)>> = vec![Vec::new(); ids.len()];
    for &e in &tree.edges {
        let ed = inst.edge(e);
        let (a, b) = (pos(ed.u), pos(ed.v));
        adj[a].push((b, ed.cost));
        adj[b].push((a, ed.cost));
    }
    let root = pos(first);
    let mut order = vec![root];
    let mut parent = vec![(usize::MAX, 0.0); ids.len()];
    let mut seen = vec![false; ids.len()];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &(w, c) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = (v, c);
                order.push(w);
            }
        }
    }
    let mut down: Vec<Cost> = ids.iter().map(|&v| inst.prize(v)).collect();
    for &v in order.iter().skip(1).rev() {
        let (p, c) = parent[v];
        down[p] += (down[v] - c).max(0.0);
    }
    let mut full = vec![0.0; ids.len()];
    full[root] = down[root];
    for &v in order.iter().skip(1) {
        let (p, c) = parent[v];
        let outside = full[p] - (down[v] - c).max(0.0);
        full[v] = down[v] + (outside - c).max(0.0);
    }
    let top = ids
        .iter()
        .enumerate()
        .filter(|&(_, &v)| inst.is_terminal(v))
        .map(|(k, _)| full[k])
        .fold(Cost::NEG_INFINITY, Cost::max);
    let k = (0..ids.len())
        .find(|&k| inst.is_terminal(ids[k]) && full[k] >= top - EPS)
        .unwrap();
    strong_prune(inst, tree, ids[k])
}

fn mst_prune(inst: &PcInstance, vertices: &BTreeSet<VertexId>) -> Option<SteinerTree> {
    if vertices.is_empty() {
        return None;
    }
    induced_mst(inst, vertices).map(|t| prune(inst, &t))
}

/// Pruning followed by a local search over single-vertex insertions,
/// single-vertex removals and attachments of excluded terminals along
/// their connection walks. Only strict improvements are accepted, for at
/// most `rounds` sweeps. Never returns a costlier tree.
pub fn prune_and_improve(inst: &PcInstance, tree: &SteinerTree, rounds: usize) -> SteinerTree {
    let mut best = tree.clone();
    let mut best_cost = tree_cost_unchecked(inst, &best);
    let offer = |cand: Option<SteinerTree>, best: &mut SteinerTree, best_cost: &mut Cost| -> bool {
        if let Some(c) = cand {
            let cost = tree_cost_unchecked(inst, &c);
            if cost < *best_cost - EPS {
                *best = c;
                *best_cost = cost;
                return true;
            }
        }
        false
    };
    offer(Some(prune(inst, &best)), &mut best, &mut best_cost);
    offer(mst_prune(inst, &best.vertices), &mut best, &mut best_cost);
    let budget = default_edge_budget(inst);
    for _ in 0..rounds {
        let mut improved = false;
        let outside: BTreeSet<VertexId> = best
            .vertices
            .iter()
            .flat_map(|&v| inst.neighbors(v).iter().map(|&(w, _)| w))
            .filter(|w| !best.vertices.contains(w))
            .collect();
        for v in outside {
            if best.vertices.contains(&v) {
                continue;
            }
            let mut set = best.vertices.clone();
            set.insert(v);
            improved |= offer(mst_prune(inst, &set), &mut best, &mut best_cost);
        }
        let inside: Vec<VertexId> = best
            .vertices
            .iter()
            .copied()
            .filter(|&v| !inst.is_fixed(v))
            .collect();
        for v in inside {
            if !best.vertices.contains(&v) {
                continue;
            }
            let mut set = best.vertices.clone();
            set.remove(&v);
            improved |= offer(mst_prune(inst, &set), &mut best, &mut best_cost);
        }
        for t in inst.potential_terminals() {
            if best.vertices.contains(&t) || best.vertices.is_empty() {
                continue;
            }
            let mut targets = vec![false; inst.vertex_capacity()];
            for &v in &best.vertices {
                targets[v] = true;
            }
            if let Some((_, walk)) = connection_walk(inst, t, &targets, inst.prize(t), budget) {
                let mut set = best.vertices.clone();
                set.extend(walk.vertices.iter().copied());
                improved |= offer(mst_prune(inst, &set), &mut best, &mut best_cost);
            }
        }
        if !improved {
            break;
        }
    }
    best
}

/// Construction starts: the [`DEFAULT_STARTS`] potential terminals of
/// highest prize (ties by id), or the smallest fixed terminal when there
/// are no potential terminals.
pub fn start_vertices(inst: &PcInstance) -> Vec<VertexId> {
    let mut open = inst.potential_terminals();
    open.sort_by(|&a, &b| inst.prize(b).total_cmp(&inst.prize(a)).then(a.cmp(&b)));
    open.truncate(DEFAULT_STARTS);
    if open.is_empty() {
        open.extend(inst.fixed_terminals().first().copied());
    }
    open
}

/// Best tree over all starts after local search (ties broken by the
/// smaller vertex set), or `None` when the instance has no terminal.
pub fn best_heuristic_tree(inst: &PcInstance) -> Option<SteinerTree> {
    let budget = default_edge_budget(inst);
    let mut best: Option<SteinerTree> = None;
    for s in start_vertices(inst) {
        let Ok(tree) = construct_tree(inst, s, budget) else {
            continue;
        };
        let tree = prune_and_improve(inst, &tree, DEFAULT_IMPROVE_ROUNDS);
        if best.as_ref().is_none_or(|b| better(inst, &tree, b)) {
            best = Some(tree);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate_cost, InstanceBuilder};

    fn fig1() -> PcInstance {
        let mut b = InstanceBuilder::new(7);
        b.edge(0, 1, 3.0)
            .edge(0, 2, 3.0)
            .edge(3, 1, 3.0)
            .edge(4, 2, 3.0)
            .edge(0, 3, 2.0);
        b.edge(0, 4, 3.0)
            .edge(3, 5, 1.0)
            .edge(4, 6, 3.0)
            .edge(5, 6, 1.0);
        for t in [0, 1, 2, 5, 6] {
            b.prize(t, 5.0);
        }
        b.build().unwrap()
    }

    #[test]
    fn fig1_construction_is_feasible_and_prunes_to_ten() {
        let inst = fig1();
        let tree = construct_tree(&inst, 0, 1000).unwrap();
        let cost = evaluate_cost(&inst, &tree).unwrap();
        assert!((10.0..=16.0).contains(&cost));
        let better = prune_and_improve(&inst, &tree, 10);
        assert_eq!(evaluate_cost(&inst, &better).unwrap(), 10.0);
    }

    #[test]
    fn spanning_tree_of_fig1_prunes_to_ten() {
        let inst = fig1();
        let all: BTreeSet<VertexId> = inst.vertices().collect();
        let mst = induced_mst(&inst, &all).unwrap();
        let out = prune_and_improve(&inst, &mst, 10);
        assert_eq!(evaluate_cost(&inst, &out).unwrap(), 10.0);
    }

    #[test]
    fn single_terminal() {
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 1.0).edge(1, 2, 1.0).prize(1, 3.0);
        let inst = b.build().unwrap();
        let tree = construct_tree(&inst, 1, 100).unwrap();
        assert_eq!(tree, SteinerTree::single(1));
        assert_eq!(evaluate_cost(&inst, &tree).unwrap(), 0.0);
    }

    #[test]
    fn pendant_zero_prize_vertex_is_pruned() {
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 1.0)
            .edge(1, 2, 1.0)
            .prize(0, 5.0)
            .prize(1, 5.0);
        let inst = b.build().unwrap();
        let full = SteinerTree::new([0, 1, 2], [0, 1]);
        let out = prune_and_improve(&inst, &full, 1);
        assert_eq!(out, SteinerTree::new([0, 1], [0]));
    }

    #[test]
    fn fixed_terminals_are_attached() {
        let mut b = InstanceBuilder::new(4);
        b.edge(0, 1, 5.0)
            .edge(1, 2, 5.0)
            .edge(2, 3, 5.0)
            .prize(0, 1.0)
            .fixed(3);
        let inst = b.build().unwrap();
        let tree = construct_tree(&inst, 0, 100).unwrap();
        assert!(tree.contains(3));
        tree.validate(&inst).unwrap();
        assert!(matches!(
            construct_tree(&inst, 1, 100),
            Err(HeuristicError::InvalidStart(1))
        ));
    }

    #[test]
    fn wheel_heuristic_is_feasible() {
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
        let tree = best_heuristic_tree(&inst).unwrap();
        assert!(evaluate_cost(&inst, &tree).unwrap() >= 8.0);
    }
}
