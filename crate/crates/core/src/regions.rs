//! Terminal-region decompositions and the lower bounds they induce.
//!
//! A decomposition partitions the vertices into connected regions, each
//! holding exactly one terminal. The radius of a region is the cheaper of
//! the terminal's prize and the distance from the terminal to the nearest
//! vertex outside its region. Any tree through a non-terminal vertex pays
//! at least the radii of all but its two nearest terminals, which yields
//! bounds for deletion and pseudo-elimination.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use crate::distance::{restricted_paths, HeapEntry};
use crate::error::RegionError;
use crate::events::{delete_vertex, pseudo_eliminate, ReductionEvent, Safety};
use crate::model::{approx_eq, exceeds, Cost, PcInstance, SteinerTree, VertexId, INF};

/// Vertices of at most this degree may be pseudo-eliminated.
pub const MAX_PSEUDO_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct TerminalRegions {
    owner: Vec<Option<VertexId>>,
    radius: Vec<Cost>,
    terminals: Vec<VertexId>,
}

impl TerminalRegions {
    /// Terminal owning the region of `v`; `None` for vertices in components
    /// without terminals.
    pub fn owner(&self, v: VertexId) -> Option<VertexId> {
        self.owner[v]
    }

    pub fn radius(&self, t: VertexId) -> Cost {
        self.radius[t]
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    pub fn region(&self, t: VertexId) -> Vec<VertexId> {
        (0..self.owner.len())
            .filter(|&v| self.owner[v] == Some(t))
            .collect()
    }

    /// All radii in ascending order.
    pub fn sorted_radii(&self) -> Vec<Cost> {
        let mut r: Vec<Cost> = self.terminals.iter().map(|&t| self.radius[t]).collect();
        r.sort_by(|a, b| a.total_cmp(b));
        r
    }

    /// Sum of the `k` smallest radii.
    pub fn smallest_radii_sum(&self, k: usize) -> Cost {
        self.sorted_radii().iter().take(k).sum()
    }

    /// The improvement objective: sum of the `s - 2` smallest radii.
    pub fn objective(&self) -> Cost {
        self.smallest_radii_sum(self.terminals.len().saturating_sub(2))
    }
}

/// Voronoi decomposition: every vertex joins its nearest terminal, ties
/// going to the smaller terminal id.
pub fn voronoi_regions(inst: &PcInstance) -> Result<TerminalRegions, RegionError> {
    let terminals = inst.terminals();
    if terminals.is_empty() {
        return Err(RegionError::NoTerminals);
    }
    let n = inst.vertex_capacity();
    let mut dist = vec![INF; n];
    let mut owner: Vec<Option<VertexId>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    for &t in &terminals {
        dist[t] = 0.0;
        owner[t] = Some(t);
        heap.push(HeapEntry {
            key: 0.0,
            tie: t,
            item: t,
        });
    }
    while let Some(HeapEntry {
        key,
        tie: base,
        item: v,
    }) = heap.pop()
    {
        if key > dist[v] || owner[v] != Some(base) {
            continue;
        }
        for &(w, e) in inst.neighbors(v) {
            let nd = key + inst.cost(e);
            let better = nd < dist[w] || (nd == dist[w] && owner[w].is_some_and(|o| base < o));
            if better && !(inst.is_terminal(w)) {
                dist[w] = nd;
                owner[w] = Some(base);
                heap.push(HeapEntry {
                    key: nd,
                    tie: base,
                    item: w,
                });
            }
        }
    }
    let mut regions = TerminalRegions {
        owner,
        radius: vec![INF; n],
        terminals,
    };
    for i in 0..regions.terminals.len() {
        let t = regions.terminals[i];
        regions.radius[t] = region_radius(inst, &regions.owner, t);
    }
    Ok(regions)
}

/// `min(p(t), distance from t to the nearest vertex outside its region)`.
fn region_radius(inst: &PcInstance, owner: &[Option<VertexId>], t: VertexId) -> Cost {
    let mut dist: alloc::collections::BTreeMap<VertexId, Cost> =
        alloc::collections::BTreeMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(t, 0.0);
    heap.push(HeapEntry {
        key: 0.0,
        tie: t,
        item: t,
    });
    let mut best = inst.effective_prize(t);
    while let Some(HeapEntry { key, item: v, .. }) = heap.pop() {
        if key > dist[&v] || key >= best {
            continue;
        }
        for &(w, e) in inst.neighbors(v) {
            let nd = key + inst.cost(e);
            if owner[w] != Some(t) {
                if nd < best {
                    best = nd;
                }
                continue;
            }
            if dist.get(&w).is_none_or(|&d| nd < d) {
                dist.insert(w, nd);
                heap.push(HeapEntry {
                    key: nd,
                    tie: w,
                    item: w,
                });
            }
        }
    }
    best
}

/// Whether the region of `t` stays connected when `removed` leaves it.
fn stays_connected(
    inst: &PcInstance,
    owner: &[Option<VertexId>],
    t: VertexId,
    removed: VertexId,
) -> bool {
    let size = owner.iter().filter(|&&o| o == Some(t)).count();
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert(t);
    let mut stack = vec![t];
    while let Some(v) = stack.pop() {
        for &(w, _) in inst.neighbors(v) {
            if w != removed && owner[w] == Some(t) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() + 1 == size
}

/// Starts from the Voronoi decomposition and moves boundary vertices to
/// neighbouring regions while this strictly increases the sum of the
/// `s - 2` smallest radii. Each round is one sweep over all vertices; the
/// search stops early when a sweep moves nothing.
pub fn build_regions(
    inst: &PcInstance,
    improvement_rounds: usize,
) -> Result<TerminalRegions, RegionError> {
    let mut regions = voronoi_regions(inst)?;
    let mut objective = regions.objective();
    for _ in 0..improvement_rounds {
        let mut moved = false;
        for v in inst.vertices() {
            if inst.is_terminal(v) {
                continue;
            }
            let Some(from) = regions.owner[v] else {
                continue;
            };
            let mut targets: Vec<VertexId> = inst
                .neighbors(v)
                .iter()
                .filter_map(|&(w, _)| regions.owner[w])
                .filter(|&o| o != from)
                .collect();
            targets.sort_unstable();
            targets.dedup();
            if targets.is_empty() || !stays_connected(inst, &regions.owner, from, v) {
                continue;
            }
            for to in targets {
                regions.owner[v] = Some(to);
                let (old_from, old_to) = (regions.radius[from], regions.radius[to]);
                regions.radius[from] = region_radius(inst, &regions.owner, from);
                regions.radius[to] = region_radius(inst, &regions.owner, to);
                let candidate = regions.objective();
                if candidate > objective {
                    objective = candidate;
                    moved = true;
                    break;
                }
                regions.owner[v] = Some(from);
                regions.radius[from] = old_from;
                regions.radius[to] = old_to;
            }
        }
        if !moved {
            break;
        }
    }
    Ok(regions)
}

/// Default number of improvement sweeps.
pub fn default_improvement_rounds(inst: &PcInstance) -> usize {
    2 * inst.vertex_count()
}

fn nearest_distances(inst: &PcInstance, v: VertexId) -> Vec<Cost> {
    let dist = restricted_paths(inst, v);
    let mut d: Vec<Cost> = inst
        .vertices()
        .filter(|&t| t != v && inst.is_terminal(t) && dist[t] < INF)
        .map(|t| dist[t])
        .collect();
    d.sort_by(|a, b| a.total_cmp(b));
    d
}

fn bound_from(regions: &TerminalRegions, nearest: &[Cost], k: usize) -> Cost {
    if nearest.len() < k {
        return INF;
    }
    let s = regions.terminals.len();
    nearest[..k].iter().sum::<Cost>() + regions.smallest_radii_sum(s.saturating_sub(k))
}

/// Lower bound on any optimal solution containing the non-terminal `v`:
/// restricted distances to its two nearest terminals plus the `s - 2`
/// smallest radii.
pub fn vertex_bound(
    inst: &PcInstance,
    regions: &TerminalRegions,
    v: VertexId,
) -> Result<Cost, RegionError> {
    if inst.is_terminal(v) {
        return Err(RegionError::TerminalVertex(v));
    }
    Ok(bound_from(regions, &nearest_distances(inst, v), 2))
}

/// Lower bound on any optimal solution in which `v` has degree three or
/// more: three nearest restricted distances plus the `s - 3` smallest radii.
pub fn degree3_bound(
    inst: &PcInstance,
    regions: &TerminalRegions,
    v: VertexId,
) -> Result<Cost, RegionError> {
    if inst.is_terminal(v) {
        return Err(RegionError::TerminalVertex(v));
    }
    Ok(bound_from(regions, &nearest_distances(inst, v), 3))
}

/// Deletes non-terminals whose vertex bound exceeds `upper_bound` and
/// pseudo-eliminates those of degree at most [`MAX_PSEUDO_DEGREE`] whose
/// degree-3 bound does. With an incumbent of cost `upper_bound` that avoids
/// the vertex, a bound equal to the upper bound also qualifies (tagged
/// [`Safety::SomeOptimum`]). Bounds are compared in the instance's own
/// objective, offset included.
pub fn apply_bound_eliminations(
    inst: &mut PcInstance,
    regions: &TerminalRegions,
    upper_bound: Cost,
    incumbent: Option<&SteinerTree>,
) -> Vec<ReductionEvent> {
    let mut events = Vec::new();
    if upper_bound == INF {
        return events;
    }
    let candidates: Vec<VertexId> = inst.vertices().filter(|&v| !inst.is_terminal(v)).collect();
    let bounds: Vec<(VertexId, Vec<Cost>)> = candidates
        .iter()
        .map(|&v| (v, nearest_distances(inst, v)))
        .collect();
    let offset = inst.offset();
    for (v, nearest) in bounds {
        if !inst.is_alive(v) || inst.vertex_count() <= 1 {
            continue;
        }
        let excluded = incumbent.is_some_and(|t| !t.contains(v));
        let verdict = |bound: Cost| -> Option<Safety> {
            let bound = bound + offset;
            if exceeds(bound, upper_bound) {
                Some(Safety::AllOptima)
            } else if excluded && approx_eq(bound, upper_bound) {
                Some(Safety::SomeOptimum)
            } else {
                None
            }
        };
        if let Some(safety) = verdict(bound_from(regions, &nearest, 2)) {
            if let Ok(ev) = delete_vertex(inst, v, safety) {
                events.push(ev);
            }
            continue;
        }
        let degree = inst.degree(v);
        if (2..=MAX_PSEUDO_DEGREE).contains(&degree) {
            if let Some(safety) = verdict(bound_from(regions, &nearest, 3)) {
                events.push(pseudo_eliminate(inst, v, safety));
            }
        }
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InstanceBuilder;

    // t1=0 t2=1 t3=2 s1=3 s2=4 t4=5 t5=6, all terminals with prize 5
    fn fig1() -> PcInstance {
        let mut b = InstanceBuilder::new(7);
        b.edge(0, 1, 3.0)
            .edge(0, 2, 3.0)
            .edge(3, 1, 3.0)
            .edge(4, 2, 3.0)
            .edge(0, 3, 2.0)
            .edge(0, 4, 3.0)
            .edge(3, 5, 1.0)
            .edge(4, 6, 3.0)
            .edge(5, 6, 1.0);
        for t in [0, 1, 2, 5, 6] {
            b.prize(t, 5.0);
        }
        b.build().unwrap()
    }

    #[test]
    fn voronoi_radii_and_bound() {
        let inst = fig1();
        let vor = build_regions(&inst, 0).unwrap();
        let r: Vec<Cost> = vor.sorted_radii();
        assert_eq!(r, vec![1.0, 1.0, 2.0, 3.0, 3.0]);
        assert_eq!(vertex_bound(&inst, &vor, 4).unwrap(), 10.0);
    }

    #[test]
    fn improved_regions_raise_the_bound() {
        let inst = fig1();
        let reg = build_regions(&inst, 5).unwrap();
        assert_eq!(reg.sorted_radii(), vec![1.0, 1.0, 3.0, 3.0, 3.0]);
        assert_eq!(reg.region(0), vec![0, 3, 4]);
        assert_eq!(vertex_bound(&inst, &reg, 4).unwrap(), 11.0);
        assert_eq!(degree3_bound(&inst, &reg, 4).unwrap(), 11.0);
    }

    #[test]
    fn single_terminal_region_is_everything() {
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 1.0).edge(1, 2, 1.0).prize(1, 2.5);
        let inst = b.build().unwrap();
        let reg = build_regions(&inst, 3).unwrap();
        assert_eq!(reg.region(1), vec![0, 1, 2]);
        assert_eq!(reg.radius(1), 2.5);
        assert!(matches!(
            vertex_bound(&inst, &reg, 1),
            Err(RegionError::TerminalVertex(1))
        ));
        assert_eq!(vertex_bound(&inst, &reg, 0).unwrap(), INF);
    }

    #[test]
    fn s2_elimination_needs_the_improved_regions() {
        let inst = fig1();
        let vor = build_regions(&inst, 0).unwrap();
        let mut a = inst.clone();
        let ev = apply_bound_eliminations(&mut a, &vor, 10.0, None);
        assert!(!ev
            .iter()
            .any(|e| matches!(e, ReductionEvent::DeleteVertex { .. })));
        let reg = build_regions(&inst, 5).unwrap();
        let mut b = inst.clone();
        let incumbent = SteinerTree::new([0, 1, 2, 3, 5, 6], [0, 1, 4, 6, 8]);
        let ev = apply_bound_eliminations(&mut b, &reg, 10.0, Some(&incumbent));
        assert!(ev
            .iter()
            .any(|e| matches!(e, ReductionEvent::DeleteVertex { vertex: 4, .. })));
    }
}
