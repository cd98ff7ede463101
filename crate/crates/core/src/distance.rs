//! Shortest paths on the instance graph: plain Dijkstra, the restricted
//! distance that may not pass through terminals, and induced spanning trees.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::model::{Cost, EdgeId, PcInstance, SteinerTree, VertexId, INF};

/// Min-heap entry ordered by `(key, tie)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct HeapEntry<T: Copy> {
    pub key: Cost,
    pub tie: usize,
    pub item: T,
}

impl<T: Copy> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Copy> Eq for HeapEntry<T> {}
impl<T: Copy> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Copy> Ord for HeapEntry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| other.tie.cmp(&self.tie))
    }
}

/// Single-source shortest path distances; unreachable vertices get [`INF`].
pub fn shortest_paths(inst: &PcInstance, source: VertexId) -> Vec<Cost> {
    let mut dist = vec![INF; inst.vertex_capacity()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        key: 0.0,
        tie: source,
        item: source,
    });
    while let Some(HeapEntry { key, item: v, .. }) = heap.pop() {
        if key > dist[v] {
            continue;
        }
        for &(w, e) in inst.neighbors(v) {
            let nd = key + inst.cost(e);
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(HeapEntry {
                    key: nd,
                    tie: w,
                    item: w,
                });
            }
        }
    }
    dist
}

/// Shortest path tree from `source`, as predecessor edges.
pub fn shortest_path_tree(inst: &PcInstance, source: VertexId) -> (Vec<Cost>, Vec<Option<EdgeId>>) {
    let mut dist = vec![INF; inst.vertex_capacity()];
    let mut pred = vec![None; inst.vertex_capacity()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        key: 0.0,
        tie: source,
        item: source,
    });
    while let Some(HeapEntry { key, item: v, .. }) = heap.pop() {
        if key > dist[v] {
            continue;
        }
        for &(w, e) in inst.neighbors(v) {
            let nd = key + inst.cost(e);
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = Some(e);
                heap.push(HeapEntry {
                    key: nd,
                    tie: w,
                    item: w,
                });
            }
        }
    }
    (dist, pred)
}

/// Distances from `source` in the graph where no terminal other than the
/// source may be an interior path vertex. Terminals are reached but not
/// expanded.
pub fn restricted_paths(inst: &PcInstance, source: VertexId) -> Vec<Cost> {
    let mut dist = vec![INF; inst.vertex_capacity()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        key: 0.0,
        tie: source,
        item: source,
    });
    while let Some(HeapEntry { key, item: v, .. }) = heap.pop() {
        if key > dist[v] {
            continue;
        }
        if v != source && inst.is_terminal(v) {
            continue;
        }
        for &(w, e) in inst.neighbors(v) {
            let nd = key + inst.cost(e);
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(HeapEntry {
                    key: nd,
                    tie: w,
                    item: w,
                });
            }
        }
    }
    dist
}

/// Restricted distance between two vertices together with the `k` nearest
/// terminals of the first one.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedDistances {
    pub distance: Cost,
    /// `(terminal, distance)` ascending by distance, then by id.
    pub nearest: Vec<(VertexId, Cost)>,
}

pub fn restricted_distance(
    inst: &PcInstance,
    from: VertexId,
    to: VertexId,
    k: usize,
) -> RestrictedDistances {
    let dist = restricted_paths(inst, from);
    RestrictedDistances {
        distance: dist[to],
        nearest: nearest_from(inst, from, &dist, k),
    }
}

/// The `k` nearest terminals of `v` under the restricted distance.
pub fn nearest_terminals(inst: &PcInstance, v: VertexId, k: usize) -> Vec<(VertexId, Cost)> {
    let dist = restricted_paths(inst, v);
    nearest_from(inst, v, &dist, k)
}

fn nearest_from(inst: &PcInstance, v: VertexId, dist: &[Cost], k: usize) -> Vec<(VertexId, Cost)> {
    let mut list: Vec<(VertexId, Cost)> = inst
        .vertices()
        .filter(|&t| t != v && inst.is_terminal(t) && dist[t] < INF)
        .map(|t| (t, dist[t]))
        .collect();
    list.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    list.truncate(k);
    list
}

/// Minimum spanning tree of the subgraph induced by `vertices`, or `None`
/// if that subgraph is disconnected.
pub fn induced_mst(inst: &PcInstance, vertices: &BTreeSet<VertexId>) -> Option<SteinerTree> {
    let mut edges: Vec<EdgeId> = Vec::new();
    for &v in vertices {
        for &(w, e) in inst.neighbors(v) {
            if v < w && vertices.contains(&w) {
                edges.push(e);
            }
        }
    }
    edges.sort_by(|&a, &b| inst.cost(a).total_cmp(&inst.cost(b)).then(a.cmp(&b)));
    let index: Vec<VertexId> = vertices.iter().copied().collect();
    let pos = |v: VertexId| index.binary_search(&v).unwrap();
    let mut dsu = DisjointSets::new(index.len());
    let mut chosen = BTreeSet::new();
    for e in edges {
        let ed = inst.edge(e);
        if dsu.union(pos(ed.u), pos(ed.v)) {
            chosen.insert(e);
        }
    }
    if !vertices.is_empty() && chosen.len() + 1 != vertices.len() {
        return None;
    }
    Some(SteinerTree {
        vertices: vertices.clone(),
        edges: chosen,
    })
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InstanceBuilder;

    #[test]
    fn direct_edge_gives_restricted_distance() {
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 2.0)
            .edge(1, 2, 5.0)
            .edge(0, 2, 9.0)
            .prize(1, 3.0);
        let inst = b.build().unwrap();
        assert_eq!(restricted_distance(&inst, 0, 1, 1).distance, 2.0);
    }

    #[test]
    fn interior_terminal_blocks_path() {
        // 0 - 1 - 2 with all three terminals
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 1.0).edge(1, 2, 1.0);
        for v in 0..3 {
            b.prize(v, 1.0);
        }
        let inst = b.build().unwrap();
        let r = restricted_distance(&inst, 0, 2, 3);
        assert_eq!(r.distance, INF);
        assert_eq!(r.nearest, vec![(1, 1.0)]);
        assert_eq!(shortest_paths(&inst, 0)[2], 2.0);
    }

    #[test]
    fn mst_of_disconnected_set_is_none() {
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 1.0).edge(1, 2, 1.0);
        let inst = b.build().unwrap();
        let set: BTreeSet<_> = [0, 2].into_iter().collect();
        assert!(induced_mst(&inst, &set).is_none());
        let all: BTreeSet<_> = [0, 1, 2].into_iter().collect();
        assert_eq!(induced_mst(&inst, &all).unwrap().edges.len(), 2);
    }
}
