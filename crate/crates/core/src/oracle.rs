//! Brute-force reference solver for small instances.
//!
//! Every vertex set that holds all fixed terminals and induces a connected
//! subgraph is priced as the minimum spanning tree of that subgraph plus
//! the prizes left outside. Sets are visited by increasing size.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::distance::induced_mst;
use crate::error::OracleError;
use crate::model::{Cost, PcInstance, SteinerTree, VertexId, INF};

pub const MAX_ORACLE_VERTICES: usize = 20;

/// Tolerance when collecting co-optimal sets.
const TIE: Cost = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    /// Optimal objective, offset included.
    pub optimum: Cost,
    /// One optimal tree.
    pub tree: SteinerTree,
    /// Every optimal vertex set (only when enumeration was requested).
    pub optimal_sets: Vec<BTreeSet<VertexId>>,
}

struct Dense {
    ids: Vec<VertexId>,
    cost: Vec<Cost>,
    adj: Vec<u32>,
    prize: Vec<Cost>,
    fixed: u32,
}

impl Dense {
    fn new(inst: &PcInstance) -> Self {
        let ids: Vec<VertexId> = inst.vertices().collect();
        let k = ids.len();
        let mut cost = vec![INF; k * k];
        let mut adj = vec![0u32; k];
        for (i, &v) in ids.iter().enumerate() {
            for &(w, e) in inst.neighbors(v) {
                let j = ids.binary_search(&w).unwrap();
                let c = inst.cost(e);
                if c < cost[i * k + j] {
                    cost[i * k + j] = c;
                }
                adj[i] |= 1 << j;
            }
        }
        let prize = ids.iter().map(|&v| inst.prize(v)).collect();
        let fixed = ids
            .iter()
            .enumerate()
            .filter(|&(_, &v)| inst.is_fixed(v))
            .fold(0u32, |m, (i, _)| m | 1 << i);
        Self {
            ids,
            cost,
            adj,
            prize,
            fixed,
        }
    }

    fn connected(&self, mask: u32) -> bool {
        let start = mask & mask.wrapping_neg();
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let i = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[i] & mask & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == mask
    }

    fn mst(&self, mask: u32) -> Cost {
        let k = self.ids.len();
        let members: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        let mut best = vec![INF; members.len()];
        let mut done = vec![false; members.len()];
        let mut total = 0.0;
        best[0] = 0.0;
        for _ in 0..members.len() {
            let mut pick = usize::MAX;
            for j in 0..members.len() {
                if !done[j] && (pick == usize::MAX || best[j] < best[pick]) {
                    pick = j;
                }
            }
            done[pick] = true;
            total += best[pick];
            for j in 0..members.len() {
                let c = self.cost[members[pick] * k + members[j]];
                if !done[j] && c < best[j] {
                    best[j] = c;
                }
            }
        }
        total
    }

    fn set(&self, mask: u32) -> BTreeSet<VertexId> {
        (0..self.ids.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.ids[i])
            .collect()
    }
}

/// Exact optimum of an instance with at most [`MAX_ORACLE_VERTICES`] alive
/// vertices. The empty set is a candidate when nothing is fixed. With
/// `enumerate_all`, every optimal vertex set is returned as well.
pub fn brute_force_opt(
    inst: &PcInstance,
    enumerate_all: bool,
) -> Result<OracleResult, OracleError> {
    let k = inst.vertex_count();
    if k > MAX_ORACLE_VERTICES {
        return Err(OracleError::TooLarge(k));
    }
    let d = Dense::new(inst);
    let total_prize: Cost = d.prize.iter().sum();
    let mut best = INF;
    let mut best_masks: Vec<u32> = Vec::new();
    let consider = |mask: u32, value: Cost, best: &mut Cost, best_masks: &mut Vec<u32>| {
        if value < *best - TIE {
            *best = value;
            best_masks.clear();
            best_masks.push(mask);
        } else if enumerate_all && value <= *best + TIE {
            best_masks.push(mask);
        }
    };
    if d.fixed == 0 {
        consider(0, total_prize, &mut best, &mut best_masks);
    }
    for size in 1..=k {
        if size < d.fixed.count_ones() as usize {
            continue;
        }
        // Gosper's hack over all masks of `size` bits
        let mut mask: u64 = (1u64 << size) - 1;
        while mask < 1u64 << k {
            let m = mask as u32;
            if m & d.fixed == d.fixed {
                let inside: Cost = (0..k)
                    .filter(|&i| m >> i & 1 == 1)
                    .map(|i| d.prize[i])
                    .sum();
                let foregone = total_prize - inside;
                let cutoff = if enumerate_all {
                    best + TIE
                } else {
                    best - TIE
                };
                if foregone <= cutoff && d.connected(m) {
                    consider(m, foregone + d.mst(m), &mut best, &mut best_masks);
                }
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    let first = best_masks.first().copied().unwrap_or(0);
    let tree = if first == 0 {
        SteinerTree::default()
    } else {
        induced_mst(inst, &d.set(first)).expect("connected set")
    };
    let optimal_sets = if enumerate_all {
        best_masks.iter().map(|&m| d.set(m)).collect()
    } else {
        Vec::new()
    };
    Ok(OracleResult {
        optimum: best + inst.offset(),
        tree,
        optimal_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate_cost, InstanceBuilder};

    #[test]
    fn path3_optimum_is_the_terminal() {
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 3.0).edge(1, 2, 3.0).prize(1, 4.0);
        let r = brute_force_opt(&b.build().unwrap(), true).unwrap();
        assert_eq!(r.optimum, 0.0);
        assert_eq!(r.optimal_sets, vec![BTreeSet::from([1])]);
    }

    #[test]
    fn wheel_optimum() {
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
        let r = brute_force_opt(&inst, true).unwrap();
        // v4 joins through the cheap spoke and v6 (prize 0) is left out
        assert_eq!(r.optimum, 8.0);
        assert_eq!(
            r.optimal_sets,
            vec![
                BTreeSet::from([0, 1, 2, 3, 4, 5]),
                BTreeSet::from([0, 1, 3, 4, 5, 6])
            ]
        );
        assert_eq!(evaluate_cost(&inst, &r.tree).unwrap(), 8.0);
        let without_v4 = induced_mst(&inst, &BTreeSet::from([0, 1, 2, 3, 5, 6])).unwrap();
        assert_eq!(evaluate_cost(&inst, &without_v4).unwrap(), 8.5);
    }

    #[test]
    fn fixed_terminals_are_respected() {
        let mut b = InstanceBuilder::new(3);
        b.edge(0, 1, 4.0)
            .edge(1, 2, 4.0)
            .fixed(0)
            .fixed(2)
            .offset(1.0);
        let r = brute_force_opt(&b.build().unwrap(), false).unwrap();
        assert_eq!(r.optimum, 9.0);
    }

    #[test]
    fn size_guard() {
        let mut b = InstanceBuilder::new(21);
        for v in 0..20 {
            b.edge(v, v + 1, 1.0);
        }
        assert_eq!(
            brute_force_opt(&b.build().unwrap(), false),
            Err(OracleError::TooLarge(21))
        );
    }
}
