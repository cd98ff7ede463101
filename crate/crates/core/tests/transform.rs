mod common;

use std::collections::BTreeSet;

use common::tiny_instance;
use steinred_core::oracle::brute_force_opt;
use steinred_core::transform::{
    arborescence_of, backmap_solution, check_arborescence, transform_pc, transform_rpc, ArcOrigin,
    SapInstance, SapKind,
};
use steinred_core::{evaluate_cost, PcInstance};

const MAX_ARCS: usize = 16;

/// Cheapest feasible arc set, checking on the way that every feasible set
/// with one root arc maps back to a tree no costlier than the set.
fn cheapest_arborescence(sap: &SapInstance, inst: &PcInstance) -> f64 {
    let m = sap.arc_count();
    assert!(m <= MAX_ARCS);
    let mut best = f64::INFINITY;
    for mask in 0u32..1 << m {
        let arcs: BTreeSet<usize> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
        if check_arborescence(sap, &arcs).is_err() {
            continue;
        }
        let cost = sap.arc_cost_sum(&arcs);
        best = best.min(cost);
        let roots = arcs
            .iter()
            .filter(|&&a| matches!(sap.origin(a), ArcOrigin::Root(_)))
            .count();
        if roots == 1 || !matches!(sap.kind(), SapKind::Pc { .. }) {
            let tree = backmap_solution(sap, inst, &arcs).unwrap();
            let value = evaluate_cost(inst, &tree).unwrap() - inst.offset();
            assert!(value <= sap.to_instance_objective(cost) + 1e-9, "{arcs:?}");
        }
    }
    best
}

fn canonical_roundtrip(sap: &SapInstance, inst: &PcInstance, root: usize) {
    let opt = brute_force_opt(inst, true).unwrap();
    for set in &opt.optimal_sets {
        if !set.contains(&root) {
            continue;
        }
        let tree = steinred_core::distance::induced_mst(inst, set).unwrap();
        let arcs = arborescence_of(sap, inst, &tree, root);
        check_arborescence(sap, &arcs).unwrap();
        assert_eq!(
            sap.to_instance_objective(sap.arc_cost_sum(&arcs)),
            opt.optimum - inst.offset()
        );
        let back = backmap_solution(sap, inst, &arcs).unwrap();
        assert_eq!(back.vertices, tree.vertices);
        assert_eq!(back.edges, tree.edges);
    }
}

#[test]
fn unrooted_transformation_is_exact() {
    for seed in 0..500 {
        let inst = tiny_instance(seed, 0, MAX_ARCS);
        let sap = transform_pc(&inst).unwrap();
        assert_eq!(
            sap.arc_count(),
            2 * inst.edge_count() + 4 * inst.potential_terminals().len()
        );
        let opt = brute_force_opt(&inst, false).unwrap().optimum;
        assert_eq!(
            sap.to_instance_objective(cheapest_arborescence(&sap, &inst)),
            opt,
            "seed {seed}"
        );
        for t in inst.potential_terminals() {
            canonical_roundtrip(&sap, &inst, t);
        }
    }
}

#[test]
fn rooted_transformation_is_exact() {
    for seed in 0..500 {
        let fixed = 1 + seed as usize % 2;
        let inst = tiny_instance(seed, fixed, MAX_ARCS);
        let (t_p, t_q) = (fixed - 1, 0);
        let sap = transform_rpc(&inst, t_p, t_q).unwrap();
        assert_eq!(
            sap.arc_count(),
            2 * inst.edge_count() + 2 * inst.potential_terminals().len()
        );
        let opt = brute_force_opt(&inst, false).unwrap().optimum;
        assert_eq!(
            sap.to_instance_objective(cheapest_arborescence(&sap, &inst)),
            opt,
            "seed {seed}"
        );
        canonical_roundtrip(&sap, &inst, t_q);
    }
}
