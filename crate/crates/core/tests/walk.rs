mod common;

use common::{rooted_suite, suite};
use steinred_core::oracle::brute_force_opt;
use steinred_core::walk::{
    default_edge_budget, dpc_upper_bound, edge_deletion_pass, left_reach_set,
    prize_constrained_length, validate_walk,
};
use steinred_core::Safety;

#[test]
fn deletions_carry_valid_witnesses() {
    for seed in 0..300 {
        let inst = suite(seed);
        let mut reduced = inst.clone();
        let deletions = edge_deletion_pass(&mut reduced, default_edge_budget(&inst), false);
        let mut replay = inst.clone();
        for d in &deletions {
            let ed = replay.edge(d.edge).clone();
            assert!(!d.witness.edges.contains(&d.edge), "seed {seed}");
            validate_walk(&replay, &d.witness).unwrap();
            let ends = (d.witness.first().unwrap(), d.witness.last().unwrap());
            assert!(ends == (ed.u, ed.v) || ends == (ed.v, ed.u), "seed {seed}");
            let lengths = prize_constrained_length(&replay, &d.witness).unwrap();
            assert!(lengths.length <= d.bound + 1e-9, "seed {seed}");
            assert!(d.bound < ed.cost, "seed {seed}");
            assert_eq!(d.safety, Safety::AllOptima);
            replay.delete_edge(d.edge);
        }
    }
}

#[test]
fn deletion_pass_preserves_the_optimum() {
    for seed in 0..1000 {
        for inst in [suite(seed), rooted_suite(seed)] {
            let before = brute_force_opt(&inst, false).unwrap().optimum;
            let mut reduced = inst.clone();
            edge_deletion_pass(&mut reduced, default_edge_budget(&inst), false);
            assert_eq!(
                brute_force_opt(&reduced, false).unwrap().optimum,
                before,
                "seed {seed}"
            );
        }
    }
}

#[test]
fn larger_budgets_never_weaken_bounds() {
    for seed in 0..200 {
        let inst = suite(seed);
        let full = default_edge_budget(&inst);
        for u in inst.vertices() {
            for v in inst.vertices().filter(|&v| v > u) {
                let mut last = f64::INFINITY;
                for budget in [1, 4, 16, full, 4 * full] {
                    let b = dpc_upper_bound(&inst, u, v, f64::INFINITY, budget);
                    assert!(b <= last, "seed {seed}: {u}-{v} budget {budget}");
                    last = b;
                }
            }
        }
    }
}

#[test]
fn reach_sets_are_sound() {
    for seed in 0..500 {
        let inst = rooted_suite(seed);
        let opt = brute_force_opt(&inst, true).unwrap();
        for t in inst.potential_terminals() {
            let reach = left_reach_set(&inst, t, default_edge_budget(&inst));
            for v in reach.members() {
                let walk = reach.witness(v).unwrap();
                assert_eq!(
                    (walk.first(), walk.last()),
                    (Some(t), Some(v)),
                    "seed {seed}"
                );
                let lengths = prize_constrained_length(&inst, &walk).unwrap();
                assert!(lengths.left_length < reach.threshold(), "seed {seed}");
                for set in &opt.optimal_sets {
                    assert!(
                        !set.contains(&v) || set.contains(&t),
                        "seed {seed}: {v} without {t}"
                    );
                }
            }
        }
    }
}
