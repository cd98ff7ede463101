mod common;

use common::{rooted_suite, suite};
use steinred_core::evaluate_cost;
use steinred_core::heuristics::{
    best_heuristic_tree, construct_tree, prune_and_improve, start_vertices,
};
use steinred_core::oracle::brute_force_opt;
use steinred_core::walk::default_edge_budget;

#[test]
fn heuristic_trees_are_feasible_and_bounded_by_the_optimum() {
    let (mut gap, mut count) = (0.0, 0);
    for seed in 0..1000 {
        let inst = rooted_suite(seed);
        let Some(tree) = best_heuristic_tree(&inst) else {
            continue;
        };
        tree.validate(&inst).unwrap();
        assert!(
            inst.fixed_terminals().iter().all(|&t| tree.contains(t)),
            "seed {seed}"
        );
        let cost = evaluate_cost(&inst, &tree).unwrap();
        let opt = brute_force_opt(&inst, false).unwrap().optimum;
        assert!(cost >= opt - 1e-9, "seed {seed}");
        gap += (cost - opt) / opt.max(1.0);
        count += 1;
    }
    println!(
        "mean relative gap {:.4} over {count} instances",
        gap / count as f64
    );
}

#[test]
fn improvement_never_raises_the_cost() {
    for seed in 0..500 {
        for inst in [suite(seed), rooted_suite(seed)] {
            for s in start_vertices(&inst) {
                let Ok(tree) = construct_tree(&inst, s, default_edge_budget(&inst)) else {
                    continue;
                };
                let before = evaluate_cost(&inst, &tree).unwrap();
                let after = prune_and_improve(&inst, &tree, 5);
                assert!(
                    evaluate_cost(&inst, &after).unwrap() <= before + 1e-9,
                    "seed {seed}"
                );
            }
        }
    }
}
