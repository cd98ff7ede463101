//! The reduction loop: cheap local tests, walk-based edge deletion,
//! heuristic upper bounds, region bounds, dual-ascent reductions and
//! probing, repeated until a round changes nothing.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::dual_ascent::{cascade, da_reductions, dual_ascent, DaReductions, MAX_ROOTS};
use crate::events::{
    contract_leaf, delete_vertex, fix_terminal, pseudo_eliminate, retransform_solution, EventLog,
    ReductionEvent, Safety,
};
use crate::heuristics::best_heuristic_tree;
use crate::model::{
    evaluate_cost, exceeds, tree_cost_unchecked, Cost, PcInstance, ProblemClass, SteinerTree,
    VertexId, EPS, INF,
};
use crate::regions::{apply_bound_eliminations, build_regions, default_improvement_rounds};
use crate::transform::{transform_pc, transform_rpc, SapInstance};
use crate::walk::{default_edge_budget, edge_deletion_pass, left_reach_set, ReachSet};

#[derive(Clone, Debug, PartialEq)]
pub struct ReduceConfig {
    pub max_rounds: usize,
    /// Relaxation budget of the walk searches; 10·|E| when `None`.
    pub edge_budget: Option<usize>,
    /// Also apply reductions that are only valid at equality (tagged
    /// [`Safety::SomeOptimum`]).
    pub equality_mode: bool,
    pub dual_ascent: bool,
    /// Number of terminals probed per round.
    pub probe_limit: usize,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        Self {
            max_rounds: 20,
            edge_budget: None,
            equality_mode: false,
            dual_ascent: true,
            probe_limit: 10,
        }
    }
}

impl ReduceConfig {
    /// Budgets used at branch-and-bound nodes.
    pub fn light() -> Self {
        Self {
            max_rounds: 4,
            probe_limit: 3,
            ..Self::default()
        }
    }

    pub fn with_edge_budget(mut self, budget: usize) -> Self {
        self.edge_budget = Some(budget);
        self
    }
}

/// Result of [`reduce_loop`].
#[derive(Clone, Debug)]
pub struct ReduceOutcome {
    pub instance: PcInstance,
    pub log: EventLog,
    /// Cost of the incumbent, or [`INF`] without one.
    pub upper_bound: Cost,
    /// Best tree found, on the original instance.
    pub incumbent: Option<SteinerTree>,
    /// Best dual-ascent bound, offset included.
    pub lower_bound: Cost,
    pub rounds: usize,
}

/// Reduces `original` to a fixpoint of all reduction tests.
pub fn reduce_loop(original: &PcInstance, config: &ReduceConfig) -> ReduceOutcome {
    let mut state = ReductionState::new(original);
    let rounds = state.run(config);
    ReduceOutcome {
        instance: state.instance,
        log: state.log,
        upper_bound: state.upper_bound,
        incumbent: state.incumbent,
        lower_bound: state.lower_bound,
        rounds,
    }
}

/// A reduced instance together with its log and bounds, all relative to
/// the original instance.
#[derive(Clone, Debug)]
pub struct ReductionState<'a> {
    pub original: &'a PcInstance,
    pub instance: PcInstance,
    pub log: EventLog,
    pub upper_bound: Cost,
    pub incumbent: Option<SteinerTree>,
    pub lower_bound: Cost,
}

impl<'a> ReductionState<'a> {
    pub fn new(original: &'a PcInstance) -> Self {
        Self {
            original,
            instance: original.clone(),
            log: EventLog::new(original),
            upper_bound: INF,
            incumbent: None,
            lower_bound: Cost::NEG_INFINITY,
        }
    }

    /// Whether the incumbent is proven optimal.
    pub fn closed(&self) -> bool {
        self.lower_bound >= self.upper_bound - EPS
    }

    fn record(&mut self, events: impl IntoIterator<Item = ReductionEvent>) -> bool {
        let before = self.log.len();
        self.log.extend(events);
        self.instance.refresh_class();
        self.log.len() > before
    }

    /// Offers a tree of the current instance as incumbent. Returns whether
    /// it improved the upper bound.
    pub fn offer(&mut self, tree: &SteinerTree) -> bool {
        if tree.validate(&self.instance).is_err() {
            return false;
        }
        if tree_cost_unchecked(&self.instance, tree) >= self.upper_bound - EPS {
            return false;
        }
        let Ok(back) = retransform_solution(&self.log, self.original, tree) else {
            return false;
        };
        let Ok(cost) = evaluate_cost(self.original, &back) else {
            return false;
        };
        if cost < self.upper_bound - EPS {
            self.upper_bound = cost;
            self.incumbent = Some(back);
            return true;
        }
        false
    }

    /// Offers an incumbent already mapped to the original instance.
    pub fn offer_original(&mut self, tree: &SteinerTree) {
        if let Ok(cost) = evaluate_cost(self.original, tree) {
            if cost < self.upper_bound - EPS {
                self.upper_bound = cost;
                self.incumbent = Some(tree.clone());
            }
        }
    }

    fn budget(&self, config: &ReduceConfig) -> usize {
        config
            .edge_budget
            .unwrap_or_else(|| default_edge_budget(&self.instance))
    }

    /// Runs reduction rounds until one changes nothing. Returns the number
    /// of rounds run.
    pub fn run(&mut self, config: &ReduceConfig) -> usize {
        let mut rounds = 0;
        while rounds < config.max_rounds {
            rounds += 1;
            if !self.round(config) || self.closed() {
                break;
            }
        }
        rounds
    }

    /// One round; returns whether anything changed.
    pub fn round(&mut self, config: &ReduceConfig) -> bool {
        let mut changed = self.basic_tests();
        changed |= self.drop_components();
        if self.instance.vertex_count() == 0 {
            self.offer(&SteinerTree::default());
            self.lower_bound = self.lower_bound.max(self.instance.offset());
            return changed;
        }
        let budget = self.budget(config);
        let deletions = edge_deletion_pass(&mut self.instance, budget, config.equality_mode);
        changed |= self.record(deletions.into_iter().map(|d| ReductionEvent::DeleteEdge {
            edge: d.edge,
            safety: d.safety,
        }));
        changed |= self.basic_tests();
        changed |= self.drop_components();

        changed |= self.heuristic();
        if let Ok(regions) =
            build_regions(&self.instance, default_improvement_rounds(&self.instance))
        {
            let incumbent = if config.equality_mode {
                self.current_incumbent()
            } else {
                None
            };
            let events = apply_bound_eliminations(
                &mut self.instance,
                &regions,
                self.upper_bound,
                incumbent.as_ref(),
            );
            changed |= self.record(events);
        }
        changed |= self.basic_tests();
        changed |= self.drop_components();

        if config.dual_ascent && self.instance.vertex_count() > 0 {
            changed |= self.dual_ascent_step(budget);
            changed |= self.basic_tests();
            if config.probe_limit > 0 && !self.closed() {
                changed |= self.probe(config.probe_limit, budget);
            }
            changed |= self.drop_components();
        }
        changed
    }

    /// The incumbent as a tree of the current instance, when it survives.
    fn current_incumbent(&self) -> Option<SteinerTree> {
        let tree = best_heuristic_tree(&self.instance)?;
        let ok = tree.validate(&self.instance).is_ok()
            && (tree_cost_unchecked(&self.instance, &tree) - self.upper_bound).abs() <= EPS;
        ok.then_some(tree)
    }

    fn heuristic(&mut self) -> bool {
        match best_heuristic_tree(&self.instance) {
            Some(tree) => self.offer(&tree),
            None if self.instance.fixed_terminals().is_empty() => {
                self.offer(&SteinerTree::default())
            }
            None => false,
        }
    }

    /// Zero-prize vertices of degree at most one are deleted and those of
    /// degree two are bypassed. A potential terminal hanging off a fixed
    /// terminal by an edge cheaper than its prize is contracted into it;
    /// when fixed terminals exist, a leaf terminal whose prize is below its
    /// edge cost is deleted.
    pub fn basic_tests(&mut self) -> bool {
        let mut any = false;
        loop {
            let mut events = Vec::new();
            let has_fixed = self.instance.vertices().any(|v| self.instance.is_fixed(v));
            let vertices: Vec<VertexId> = self.instance.vertices().collect();
            for v in vertices {
                let inst = &mut self.instance;
                if !inst.is_alive(v) || inst.is_fixed(v) {
                    continue;
                }
                let degree = inst.degree(v);
                if inst.prize(v) == 0.0 {
                    if degree <= 1 {
                        events.extend(delete_vertex(inst, v, Safety::AllOptima).ok());
                    } else if degree == 2 {
                        events.push(pseudo_eliminate(inst, v, Safety::AllOptima));
                    }
                } else if degree == 1 {
                    let (w, e) = inst.neighbors(v)[0];
                    let (p, c) = (inst.prize(v), inst.cost(e));
                    if inst.is_fixed(w) && p > c {
                        events.push(contract_leaf(inst, w, v));
                    } else if has_fixed && p < c {
                        events.extend(delete_vertex(inst, v, Safety::AllOptima).ok());
                    }
                } else if degree == 0 && has_fixed {
                    events.extend(delete_vertex(inst, v, Safety::AllOptima).ok());
                }
            }
            if !self.record(events) {
                break;
            }
            any = true;
        }
        any
    }

    /// Deletes components that cannot hold an optimal solution: those
    /// without a fixed terminal when fixed terminals exist, otherwise those
    /// without any terminal.
    pub fn drop_components(&mut self) -> bool {
        let inst = &self.instance;
        let has_fixed = inst.vertices().any(|v| inst.is_fixed(v));
        let doomed: Vec<VertexId> = inst
            .components()
            .into_iter()
            .filter(|comp| {
                if has_fixed {
                    !comp.iter().any(|&v| inst.is_fixed(v))
                } else {
                    !comp.iter().any(|&v| inst.is_terminal(v))
                }
            })
            .flatten()
            .collect();
        let mut events = Vec::new();
        for v in doomed {
            events.extend(delete_vertex(&mut self.instance, v, Safety::AllOptima).ok());
        }
        self.record(events)
    }

    fn reach_sets(&self, budget: usize) -> Vec<ReachSet> {
        self.instance
            .potential_terminals()
            .into_iter()
            .map(|t| left_reach_set(&self.instance, t, budget))
            .collect()
    }

    /// Dual ascent from every bounding root with the resulting reductions;
    /// every run works on the instance left by the previous one.
    fn dual_ascent_step(&mut self, budget: usize) -> bool {
        let reach = self.reach_sets(budget);
        let mut changed = false;
        for root in bounding_roots(&self.instance) {
            let Some(sap) = build_sap(&self.instance, root) else {
                continue;
            };
            let Ok(result) = dual_ascent(&sap) else {
                continue;
            };
            let lb = result.instance_bound(&sap, &self.instance);
            self.lower_bound = self.lower_bound.max(lb);
            let DaReductions { events, .. } =
                da_reductions(&mut self.instance, &sap, &result, self.upper_bound, &reach);
            changed |= self.record(events);
        }
        changed
    }

    /// Probes the highest-prize unfixed terminals.
    fn probe(&mut self, limit: usize, budget: usize) -> bool {
        let reach = self.reach_sets(budget);
        let mut candidates = self.instance.potential_terminals();
        candidates.sort_by(|&a, &b| {
            self.instance
                .prize(b)
                .total_cmp(&self.instance.prize(a))
                .then(a.cmp(&b))
        });
        candidates.truncate(limit);
        let mut changed = false;
        for t in candidates {
            if !self.instance.is_alive(t) || self.instance.is_fixed(t) {
                continue;
            }
            let events = probe_vertex(&mut self.instance, t, self.upper_bound, &reach);
            changed |= self.record(events);
        }
        changed
    }
}

/// Roots for the bounding transformations: `None` stands for the unrooted
/// transformation; otherwise up to [`MAX_ROOTS`] fixed terminals, highest
/// degree first.
pub fn bounding_roots(inst: &PcInstance) -> Vec<Option<VertexId>> {
    if inst.class() == ProblemClass::Pc || inst.fixed_terminals().is_empty() {
        return Vec::from([None]);
    }
    let mut fixed = inst.fixed_terminals();
    fixed.sort_by_key(|&t| (Reverse(inst.degree(t)), t));
    fixed.truncate(MAX_ROOTS);
    fixed.into_iter().map(Some).collect()
}

fn build_sap(inst: &PcInstance, root: Option<VertexId>) -> Option<SapInstance> {
    match root {
        None => transform_pc(inst).ok(),
        Some(t) if inst.is_alive(t) && inst.is_fixed(t) => transform_rpc(inst, t, t).ok(),
        Some(_) => None,
    }
}

/// Lower bound on the optimum of `inst` (offset included) from one
/// dual-ascent run; [`INF`] when the fixed terminals cannot be connected.
pub fn instance_lower_bound(inst: &PcInstance) -> Cost {
    let fixed = inst.fixed_terminals();
    if inst.terminals().is_empty() {
        return inst.offset();
    }
    if let Some(&f) = fixed.first() {
        let comps = inst.components();
        let comp = comps.iter().find(|c| c.contains(&f)).unwrap();
        if fixed.iter().any(|t| comp.binary_search(t).is_err()) {
            return INF;
        }
    }
    let root = bounding_roots(inst)[0];
    match build_sap(inst, root).map(|sap| dual_ascent(&sap).map(|r| r.instance_bound(&sap, inst))) {
        Some(Ok(lb)) => lb,
        Some(Err(_)) => INF,
        None => inst.offset(),
    }
}

/// Tries both decisions for the potential terminal `t`. If every solution
/// containing `t` (with the terminals it implies) has a lower bound above
/// `upper_bound`, `t` is deleted; if every solution without `t` and the
/// vertices implying it does, `t` is fixed. Returns the applied events.
pub fn probe_vertex(
    inst: &mut PcInstance,
    t: VertexId,
    upper_bound: Cost,
    reach_sets: &[ReachSet],
) -> Vec<ReductionEvent> {
    let mut events = Vec::new();
    if upper_bound == INF || !inst.is_alive(t) || !inst.is_potential_terminal(t) {
        return events;
    }
    let mut with = inst.clone();
    with.fix_terminal(t);
    cascade(&mut with, reach_sets, &mut DaReductions::default());
    if exceeds(instance_lower_bound(&with), upper_bound) {
        events.extend(delete_vertex(inst, t, Safety::AllOptima).ok());
        return events;
    }
    let own: BTreeMap<VertexId, &ReachSet> = reach_sets.iter().map(|r| (r.source(), r)).collect();
    let mut without = inst.clone();
    let mut removed = Vec::from([t]);
    if let Some(r) = own.get(&t) {
        removed.extend(r.members().filter(|&m| without.is_alive(m)));
    }
    let blocked = removed.iter().any(|&m| without.is_fixed(m));
    if !blocked {
        for &m in &removed {
            let _ = without.delete_vertex(m);
        }
    }
    if blocked || exceeds(instance_lower_bound(&without), upper_bound) {
        events.push(fix_terminal(inst, t, Safety::AllOptima));
        let mut out = DaReductions::default();
        cascade(inst, reach_sets, &mut out);
        events.extend(out.events);
    }
    events
}
