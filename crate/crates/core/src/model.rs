//! Instance and solution representation.
//!
//! A [`PcInstance`] keeps stable vertex and edge ids for its whole lifetime.
//! Reductions mark vertices and edges dead instead of renumbering them, and
//! new edges (from pseudo-elimination) are appended. This keeps every id in
//! an [`EventLog`](crate::events::EventLog) meaningful until the solution is
//! mapped back to the original instance.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::ModelError;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Edge costs, prizes and objective values.
pub type Cost = f64;

/// Absolute tolerance for cost comparisons.
pub const EPS: Cost = 1e-9;

/// Sentinel for unreachable vertices.
pub const INF: Cost = f64::INFINITY;

/// `a > b` beyond the comparison tolerance.
#[inline]
pub fn exceeds(a: Cost, b: Cost) -> bool {
    a > b + EPS
}

/// `a == b` up to the comparison tolerance.
#[inline]
pub fn approx_eq(a: Cost, b: Cost) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= EPS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProblemClass {
    /// Prize-collecting, no fixed terminals.
    Pc,
    /// Rooted prize-collecting: some fixed terminals and some unfixed potential terminals.
    Rpc,
    /// Classical Steiner tree: every positive-prize vertex is fixed.
    Spg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub cost: Cost,
}

impl Edge {
    /// The endpoint opposite to `x`.
    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected graph with edge costs, vertex prizes and fixed terminals.
#[derive(Clone, Debug, PartialEq)]
pub struct PcInstance {
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    edges: Vec<Edge>,
    edge_alive: Vec<bool>,
    vertex_alive: Vec<bool>,
    prizes: Vec<Cost>,
    fixed: Vec<bool>,
    offset: Cost,
    class: ProblemClass,
    alive_vertices: usize,
    alive_edges: usize,
}

/// Collects vertices and edges and validates them into a [`PcInstance`].
#[derive(Clone, Debug, Default)]
pub struct InstanceBuilder {
    prizes: Vec<Cost>,
    fixed: Vec<bool>,
    edges: Vec<(VertexId, VertexId, Cost)>,
    offset: Cost,
}

impl InstanceBuilder {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            prizes: vec![0.0; vertex_count],
            fixed: vec![false; vertex_count],
            edges: Vec::new(),
            offset: 0.0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.prizes.len()
    }

    pub fn edge(&mut self, u: VertexId, v: VertexId, cost: Cost) -> &mut Self {
        self.edges.push((u, v, cost));
        self
    }

    pub fn prize(&mut self, v: VertexId, prize: Cost) -> &mut Self {
        if v < self.prizes.len() {
            self.prizes[v] = prize;
        }
        self
    }

    pub fn fixed(&mut self, v: VertexId) -> &mut Self {
        if v < self.fixed.len() {
            self.fixed[v] = true;
        }
        self
    }

    pub fn offset(&mut self, offset: Cost) -> &mut Self {
        self.offset = offset;
        self
    }

    /// Validates and builds. Parallel edges collapse to the cheapest copy
    /// (keeping the id of the first occurrence), self-loops are dropped, and
    /// disconnected graphs are rejected.
    pub fn build(&self) -> Result<PcInstance, ModelError> {
        let n = self.prizes.len();
        for (v, &p) in self.prizes.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(ModelError::InvalidPrize {
                    vertex: v,
                    prize: p,
                });
            }
        }
        if !self.offset.is_finite() {
            return Err(ModelError::InvalidOffset);
        }
        let mut inst = PcInstance::empty(n);
        inst.offset = self.offset;
        for (v, &p) in self.prizes.iter().enumerate() {
            inst.prizes[v] = if self.fixed[v] { 0.0 } else { p };
            inst.fixed[v] = self.fixed[v];
        }
        for &(u, v, c) in &self.edges {
            if u >= n || v >= n {
                return Err(ModelError::VertexOutOfRange {
                    vertex: u.max(v),
                    count: n,
                });
            }
            if !c.is_finite() || c <= 0.0 {
                return Err(ModelError::NonPositiveCost { u, v, cost: c });
            }
            if u == v {
                continue;
            }
            match inst.find_edge(u, v) {
                Some(e) => {
                    if c < inst.edges[e].cost {
                        inst.edges[e].cost = c;
                    }
                }
                None => {
                    inst.push_edge(u, v, c);
                }
            }
        }
        if !inst.is_connected() {
            return Err(ModelError::Disconnected);
        }
        inst.refresh_class();
        Ok(inst)
    }
}

impl PcInstance {
    fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edges: Vec::new(),
            edge_alive: Vec::new(),
            vertex_alive: vec![true; n],
            prizes: vec![0.0; n],
            fixed: vec![false; n],
            offset: 0.0,
            class: ProblemClass::Pc,
            alive_vertices: n,
            alive_edges: 0,
        }
    }

    fn push_edge(&mut self, u: VertexId, v: VertexId, cost: Cost) -> EdgeId {
        let e = self.edges.len();
        self.edges.push(Edge { u, v, cost });
        self.edge_alive.push(true);
        self.adjacency[u].push((v, e));
        self.adjacency[v].push((u, e));
        self.alive_edges += 1;
        e
    }

    /// Size of the vertex id space (dead vertices included).
    pub fn vertex_capacity(&self) -> usize {
        self.vertex_alive.len()
    }

    /// Size of the edge id space (dead edges included).
    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.alive_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.alive_edges
    }

    pub fn offset(&self) -> Cost {
        self.offset
    }

    pub fn class(&self) -> ProblemClass {
        self.class
    }

    #[inline]
    pub fn is_alive(&self, v: VertexId) -> bool {
        self.vertex_alive[v]
    }

    #[inline]
    pub fn is_edge_alive(&self, e: EdgeId) -> bool {
        self.edge_alive[e]
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    #[inline]
    pub fn cost(&self, e: EdgeId) -> Cost {
        self.edges[e].cost
    }

    #[inline]
    pub fn prize(&self, v: VertexId) -> Cost {
        self.prizes[v]
    }

    #[inline]
    pub fn is_fixed(&self, v: VertexId) -> bool {
        self.fixed[v]
    }

    /// Prize as seen by the bound tests: fixed terminals never pay their prize
    /// and behave like terminals of unbounded prize.
    #[inline]
    pub fn effective_prize(&self, v: VertexId) -> Cost {
        if self.fixed[v] {
            INF
        } else {
            self.prizes[v]
        }
    }

    /// Fixed terminal or vertex with positive prize.
    #[inline]
    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.fixed[v] || self.prizes[v] > 0.0
    }

    /// Positive prize and not fixed.
    #[inline]
    pub fn is_potential_terminal(&self, v: VertexId) -> bool {
        !self.fixed[v] && self.prizes[v] > 0.0
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_alive.len()).filter(move |&v| self.vertex_alive[v])
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).filter(move |&e| self.edge_alive[e])
    }

    /// Alive fixed terminals and positive-prize vertices, ascending.
    pub fn terminals(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_terminal(v)).collect()
    }

    /// Alive unfixed positive-prize vertices, ascending.
    pub fn potential_terminals(&self) -> Vec<VertexId> {
        self.vertices()
            .filter(|&v| self.is_potential_terminal(v))
            .collect()
    }

    pub fn fixed_terminals(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.fixed[v]).collect()
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a]
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, e)| e)
    }

    /// Sum of all alive prizes.
    pub fn total_prize(&self) -> Cost {
        self.vertices().map(|v| self.prizes[v]).sum()
    }

    /// Recomputes the class tag from the fixed set and the remaining prizes.
    pub fn refresh_class(&mut self) {
        let has_fixed = self.vertices().any(|v| self.fixed[v]);
        let has_open = self.vertices().any(|v| self.is_potential_terminal(v));
        let class = match (has_fixed, has_open) {
            (false, _) => ProblemClass::Pc,
            (true, true) => ProblemClass::Rpc,
            (true, false) => ProblemClass::Spg,
        };
        // never step back to a weaker class
        self.class = self.class.max(class);
    }

    /// Every alive vertex reachable from the first alive vertex.
    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices().next() else {
            return true;
        };
        let mut seen = vec![false; self.vertex_capacity()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.alive_vertices
    }

    /// Connected components of the alive graph, each sorted ascending,
    /// ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.vertex_capacity()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    // ----- mutation, used by the reduction engine -----

    pub fn delete_edge(&mut self, e: EdgeId) {
        if !self.edge_alive[e] {
            return;
        }
        self.edge_alive[e] = false;
        self.alive_edges -= 1;
        let Edge { u, v, .. } = self.edges[e];
        self.adjacency[u].retain(|&(_, f)| f != e);
        self.adjacency[v].retain(|&(_, f)| f != e);
    }

    /// Deletes `v` with its incident edges. The prize of `v` is moved into
    /// the offset, since no solution can collect it any more.
    pub fn delete_vertex(&mut self, v: VertexId) -> Result<Vec<EdgeId>, ModelError> {
        if !self.vertex_alive[v] {
            return Err(ModelError::DeadVertex(v));
        }
        if self.fixed[v] {
            return Err(ModelError::FixedTerminalRemoved(v));
        }
        let incident: Vec<EdgeId> = self.adjacency[v].iter().map(|&(_, e)| e).collect();
        for &e in &incident {
            self.delete_edge(e);
        }
        self.offset += self.prizes[v];
        self.vertex_alive[v] = false;
        self.alive_vertices -= 1;
        Ok(incident)
    }

    /// Removes a vertex whose prize was already accounted for elsewhere
    /// (edge contraction). Incident edges must have been removed.
    pub(crate) fn retire_vertex(&mut self, v: VertexId) {
        debug_assert!(self.adjacency[v].is_empty());
        self.prizes[v] = 0.0;
        self.fixed[v] = false;
        self.vertex_alive[v] = false;
        self.alive_vertices -= 1;
    }

    /// Makes `v` a fixed terminal. Its prize is dropped since it is never foregone.
    pub fn fix_terminal(&mut self, v: VertexId) {
        self.fixed[v] = true;
        self.prizes[v] = 0.0;
        self.refresh_class();
    }

    /// Adds an edge, collapsing onto an existing parallel edge. Returns the id
    /// of the new edge, or `None` if an existing edge was at least as cheap.
    /// When the new edge is cheaper, the old one is deleted and its id is
    /// returned in the second slot.
    pub fn add_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        cost: Cost,
    ) -> (Option<EdgeId>, Option<EdgeId>) {
        debug_assert!(u != v && cost > 0.0);
        match self.find_edge(u, v) {
            Some(old) if self.edges[old].cost <= cost => (None, None),
            Some(old) => {
                self.delete_edge(old);
                (Some(self.push_edge(u, v, cost)), Some(old))
            }
            None => (Some(self.push_edge(u, v, cost)), None),
        }
    }

    pub fn add_offset(&mut self, amount: Cost) {
        self.offset += amount;
    }

    /// Copy with dead elements dropped and ids renumbered in ascending order.
    /// Returns the new instance and the old id of every new vertex.
    pub fn compacted(&self) -> (PcInstance, Vec<VertexId>) {
        let old_ids: Vec<VertexId> = self.vertices().collect();
        let mut new_id = vec![usize::MAX; self.vertex_capacity()];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let mut out = PcInstance::empty(old_ids.len());
        out.offset = self.offset;
        for (i, &v) in old_ids.iter().enumerate() {
            out.prizes[i] = self.prizes[v];
            out.fixed[i] = self.fixed[v];
        }
        for e in self.edge_ids() {
            let Edge { u, v, cost } = self.edges[e];
            out.push_edge(new_id[u], new_id[v], cost);
        }
        out.class = self.class;
        (out, old_ids)
    }
}

/// A candidate solution: a tree given by its vertex and edge sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SteinerTree {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl SteinerTree {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Self {
        Self {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().collect(),
        }
    }

    pub fn single(v: VertexId) -> Self {
        Self::new([v], [])
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Checks the tree invariants against `inst`. The empty tree is accepted
    /// only when the instance has no fixed terminals.
    pub fn validate(&self, inst: &PcInstance) -> Result<(), ModelError> {
        for &v in &self.vertices {
            if v >= inst.vertex_capacity() || !inst.is_alive(v) {
                return Err(ModelError::UnknownVertex(v));
            }
        }
        for &e in &self.edges {
            if e >= inst.edge_capacity() || !inst.is_edge_alive(e) {
                return Err(ModelError::UnknownEdge(e));
            }
            let ed = inst.edge(e);
            if !self.vertices.contains(&ed.u) || !self.vertices.contains(&ed.v) {
                return Err(ModelError::DanglingEdge(e));
            }
        }
        if let Some(f) = inst
            .vertices()
            .find(|&v| inst.is_fixed(v) && !self.contains(v))
        {
            return Err(ModelError::MissingFixedTerminal(f));
        }
        if self.vertices.is_empty() {
            return Ok(());
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return Err(ModelError::NotATree {
                vertices: self.vertices.len(),
                edges: self.edges.len(),
            });
        }
        // connectivity over tree edges
        let start = *self.vertices.iter().next().unwrap();
        let mut seen = BTreeSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(w, e) in inst.neighbors(v) {
                if self.edges.contains(&e) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != self.vertices.len() {
            return Err(ModelError::Disconnected);
        }
        Ok(())
    }
}

/// Objective value: tree edge costs, plus prizes of vertices left out, plus
/// the instance offset.
pub fn evaluate_cost(inst: &PcInstance, tree: &SteinerTree) -> Result<Cost, ModelError> {
    tree.validate(inst)?;
    Ok(tree_cost_unchecked(inst, tree))
}

pub(crate) fn tree_cost_unchecked(inst: &PcInstance, tree: &SteinerTree) -> Cost {
    let edges: Cost = tree.edges.iter().map(|&e| inst.cost(e)).sum();
    let foregone: Cost = inst
        .vertices()
        .filter(|v| !tree.vertices.contains(v))
        .map(|v| inst.prize(v))
        .sum();
    edges + foregone + inst.offset()
}
