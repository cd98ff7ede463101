//! Transformations to the Steiner arborescence problem.
//!
//! [`transform_pc`] turns an instance without fixed terminals into an SAP with
//! an artificial root `r'` and a collector vertex `v0'`: every terminal `t`
//! gets a copy `t'` that is reached either from `t` for free (when `t` is in
//! the tree) or from `v0'` at the price `p(t)` (when it is not). The root
//! reaches the original graph through arcs of cost `M`, the sum of all
//! prizes, so every arborescence pays `M` exactly once.
//!
//! [`transform_rpc`] needs fixed terminals and roots the SAP at one of them;
//! there is no `M` shift.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::SapError;
use crate::model::{Cost, EdgeId, PcInstance, ProblemClass, SteinerTree, VertexId};

/// Where an SAP arc comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcOrigin {
    /// `u -> v` for edge `{u, v}` as stored.
    Forward(EdgeId),
    /// `v -> u` for edge `{u, v}` as stored.
    Backward(EdgeId),
    /// `r' -> t`.
    Root(VertexId),
    /// `t -> t'`.
    Sink(VertexId),
    /// `v0' -> t'`, or `t_p -> t'` in the rooted transformation.
    Prize(VertexId),
    /// `t -> v0'`.
    Zero(VertexId),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub cost: Cost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SapKind {
    /// Artificial root and collector vertex.
    Pc { collector: usize },
    /// Rooted at `t_q`; prize arcs leave `t_p`.
    Rpc { t_p: VertexId, t_q: VertexId },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SapInstance {
    arcs: Vec<Arc>,
    origin: Vec<ArcOrigin>,
    terminal: Vec<bool>,
    root: usize,
    big_m: Cost,
    kind: SapKind,
    /// SAP vertex of each original vertex id.
    sap_of: Vec<Option<usize>>,
    /// Original vertex of each SAP vertex below `original_count`.
    original_of: Vec<VertexId>,
    prize_arc: Vec<Option<usize>>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

impl SapInstance {
    fn with_originals(inst: &PcInstance, extra: usize) -> Self {
        let original_of: Vec<VertexId> = inst.vertices().collect();
        let mut sap_of = vec![None; inst.vertex_capacity()];
        for (i, &v) in original_of.iter().enumerate() {
            sap_of[v] = Some(i);
        }
        let n = original_of.len() + extra;
        Self {
            arcs: Vec::new(),
            origin: Vec::new(),
            terminal: vec![false; n],
            root: 0,
            big_m: 0.0,
            kind: SapKind::Pc { collector: 0 },
            sap_of,
            original_of,
            prize_arc: vec![None; inst.vertex_capacity()],
            out_arcs: vec![Vec::new(); n],
            in_arcs: vec![Vec::new(); n],
        }
    }

    fn push(&mut self, tail: usize, head: usize, cost: Cost, origin: ArcOrigin) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { tail, head, cost });
        self.origin.push(origin);
        self.out_arcs[tail].push(id);
        self.in_arcs[head].push(id);
        id
    }

    fn push_edges(&mut self, inst: &PcInstance) {
        for e in inst.edge_ids() {
            let ed = inst.edge(e);
            let (u, v) = (self.sap_of[ed.u].unwrap(), self.sap_of[ed.v].unwrap());
            self.push(u, v, ed.cost, ArcOrigin::Forward(e));
            self.push(v, u, ed.cost, ArcOrigin::Backward(e));
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.terminal.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: usize) -> Arc {
        self.arcs[a]
    }

    pub fn origin(&self, a: usize) -> ArcOrigin {
        self.origin[a]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn big_m(&self) -> Cost {
        self.big_m
    }

    pub fn kind(&self) -> SapKind {
        self.kind
    }

    pub fn is_terminal(&self, x: usize) -> bool {
        self.terminal[x]
    }

    pub fn terminals(&self) -> Vec<usize> {
        (0..self.terminal.len())
            .filter(|&x| self.terminal[x])
            .collect()
    }

    pub fn out_arcs(&self, x: usize) -> &[usize] {
        &self.out_arcs[x]
    }

    pub fn in_arcs(&self, x: usize) -> &[usize] {
        &self.in_arcs[x]
    }

    pub fn sap_vertex(&self, v: VertexId) -> Option<usize> {
        self.sap_of.get(v).copied().flatten()
    }

    pub fn original_vertex(&self, x: usize) -> Option<VertexId> {
        self.original_of.get(x).copied()
    }

    /// The arc paying the prize of the unfixed potential terminal `t`.
    pub fn prize_arc(&self, t: VertexId) -> Option<usize> {
        self.prize_arc.get(t).copied().flatten()
    }

    pub fn arc_cost_sum(&self, arcs: &BTreeSet<usize>) -> Cost {
        arcs.iter().map(|&a| self.arcs[a].cost).sum()
    }

    /// Converts an SAP objective value to the instance objective (offset
    /// excluded).
    pub fn to_instance_objective(&self, sap_value: Cost) -> Cost {
        sap_value - self.big_m
    }
}

/// Transformation of an instance without fixed terminals.
pub fn transform_pc(inst: &PcInstance) -> Result<SapInstance, SapError> {
    if inst.class() != ProblemClass::Pc || !inst.fixed_terminals().is_empty() {
        return Err(SapError::WrongClass { expected: "PC" });
    }
    let terminals = inst.potential_terminals();
    if terminals.is_empty() {
        return Err(SapError::NoTerminals);
    }
    let s = terminals.len();
    let mut sap = SapInstance::with_originals(inst, 2 + s);
    let n = sap.original_of.len();
    let (root, collector) = (n, n + 1);
    sap.root = root;
    sap.kind = SapKind::Pc { collector };
    sap.big_m = terminals.iter().map(|&t| inst.prize(t)).sum();
    sap.terminal[root] = true;
    sap.push_edges(inst);
    for (i, &t) in terminals.iter().enumerate() {
        let x = sap.sap_of[t].unwrap();
        let copy = n + 2 + i;
        sap.terminal[copy] = true;
        sap.push(root, x, sap.big_m, ArcOrigin::Root(t));
        sap.push(x, copy, 0.0, ArcOrigin::Sink(t));
        sap.push(x, collector, 0.0, ArcOrigin::Zero(t));
        let a = sap.push(collector, copy, inst.prize(t), ArcOrigin::Prize(t));
        sap.prize_arc[t] = Some(a);
    }
    Ok(sap)
}

/// Transformation of an instance with fixed terminals, rooted at `t_q` with
/// prize arcs leaving `t_p` (the two may coincide).
pub fn transform_rpc(
    inst: &PcInstance,
    t_p: VertexId,
    t_q: VertexId,
) -> Result<SapInstance, SapError> {
    for t in [t_p, t_q] {
        if t >= inst.vertex_capacity() || !inst.is_alive(t) || !inst.is_fixed(t) {
            return Err(SapError::NotFixed(t));
        }
    }
    let open = inst.potential_terminals();
    let mut sap = SapInstance::with_originals(inst, open.len());
    let n = sap.original_of.len();
    sap.root = sap.sap_of[t_q].unwrap();
    sap.kind = SapKind::Rpc { t_p, t_q };
    for f in inst.fixed_terminals() {
        let x = sap.sap_of[f].unwrap();
        sap.terminal[x] = true;
    }
    sap.push_edges(inst);
    let xp = sap.sap_of[t_p].unwrap();
    for (i, &t) in open.iter().enumerate() {
        let x = sap.sap_of[t].unwrap();
        let copy = n + i;
        sap.terminal[copy] = true;
        sap.push(x, copy, 0.0, ArcOrigin::Sink(t));
        let a = sap.push(xp, copy, inst.prize(t), ArcOrigin::Prize(t));
        sap.prize_arc[t] = Some(a);
    }
    Ok(sap)
}

/// Checks that `arcs` is an arborescence rooted at the SAP root that
/// reaches every terminal.
pub fn check_arborescence(sap: &SapInstance, arcs: &BTreeSet<usize>) -> Result<(), SapError> {
    let n = sap.vertex_count();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &a in arcs {
        if a >= sap.arc_count() {
            return Err(SapError::Infeasible("unknown arc"));
        }
        let arc = sap.arcs[a];
        indeg[arc.head] += 1;
        out[arc.tail].push(arc.head);
    }
    if indeg[sap.root] > 0 || indeg.iter().any(|&d| d > 1) {
        return Err(SapError::Infeasible("a vertex has two entering arcs"));
    }
    let mut seen = vec![false; n];
    seen[sap.root] = true;
    let mut stack = vec![sap.root];
    let mut reached_arcs = 0;
    while let Some(x) = stack.pop() {
        for &y in &out[x] {
            reached_arcs += 1;
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if reached_arcs != arcs.len() {
        return Err(SapError::Infeasible("arcs not reachable from the root"));
    }
    if let Some(t) = (0..n).find(|&x| sap.terminal[x] && !seen[x]) {
        return Err(SapError::Unreachable(t));
    }
    Ok(())
}

/// Maps an arborescence back to a tree of the original instance: the tree
/// consists of the original vertices the arborescence visits and the
/// edges behind its edge arcs. An arborescence of the unrooted
/// transformation must use exactly one root arc.
pub fn backmap_solution(
    sap: &SapInstance,
    inst: &PcInstance,
    arcs: &BTreeSet<usize>,
) -> Result<SteinerTree, SapError> {
    check_arborescence(sap, arcs)?;
    let mut tree = SteinerTree::default();
    let mut root_arcs = 0;
    for &a in arcs {
        match sap.origin[a] {
            ArcOrigin::Forward(e) | ArcOrigin::Backward(e) => {
                let ed = inst.edge(e);
                tree.edges.insert(e);
                tree.vertices.insert(ed.u);
                tree.vertices.insert(ed.v);
            }
            ArcOrigin::Root(t) => {
                root_arcs += 1;
                tree.vertices.insert(t);
            }
            _ => {}
        }
    }
    match sap.kind {
        SapKind::Pc { .. } if root_arcs != 1 => {
            return Err(SapError::Infeasible("expected exactly one root arc"));
        }
        SapKind::Rpc { t_q, .. } => {
            tree.vertices.insert(t_q);
        }
        _ => {}
    }
    tree.validate(inst)
        .map_err(|_| SapError::Infeasible("edge arcs do not form a tree"))?;
    Ok(tree)
}

/// Canonical arborescence of a tree: edges oriented away from `root`, each
/// tree terminal reaching its copy directly and every other copy paid
/// through its prize arc. For the unrooted transformation `root` must be a
/// potential terminal in the tree.
pub fn arborescence_of(
    sap: &SapInstance,
    inst: &PcInstance,
    tree: &SteinerTree,
    root: VertexId,
) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    seen.insert(root);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &(w, e) in inst.neighbors(v) {
            if tree.edges.contains(&e) && seen.insert(w) {
                let forward = inst.edge(e).u == v;
                let origin = if forward {
                    ArcOrigin::Forward(e)
                } else {
                    ArcOrigin::Backward(e)
                };
                out.insert(sap.origin.iter().position(|&o| o == origin).unwrap());
                stack.push(w);
            }
        }
    }
    let find = |o: ArcOrigin| sap.origin.iter().position(|&x| x == o).unwrap();
    if let SapKind::Pc { .. } = sap.kind {
        out.insert(find(ArcOrigin::Root(root)));
        out.insert(find(ArcOrigin::Zero(root)));
    }
    for v in inst.potential_terminals() {
        if tree.contains(v) {
            out.insert(find(ArcOrigin::Sink(v)));
        } else {
            out.insert(find(ArcOrigin::Prize(v)));
        }
    }
    out
}
