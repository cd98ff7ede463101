mod common;

use common::{rooted_suite, suite};
use steinred_core::oracle::brute_force_opt;
use steinred_core::{evaluate_cost, solve, SolveConfig};

#[test]
fn solver_matches_the_oracle() {
    for seed in 0..300 {
        for inst in [suite(seed), rooted_suite(seed)] {
            let opt = brute_force_opt(&inst, false).unwrap().optimum;
            let r = solve(&inst, &SolveConfig::default(), &|| false);
            assert!(r.optimal, "seed {seed}");
            assert_eq!(
                evaluate_cost(&inst, &r.tree.unwrap()).unwrap(),
                opt,
                "seed {seed}"
            );
        }
    }
}

#[test]
fn solving_twice_gives_identical_runs() {
    for seed in 0..100 {
        let inst = random(seed);
        let a = solve(&inst, &SolveConfig::default(), &|| false);
        let b = solve(&inst, &SolveConfig::default(), &|| false);
        assert_eq!(a, b, "seed {seed}");
    }
}

fn random(seed: u64) -> steinred_core::PcInstance {
    common::random_instance(seed, (20, 40), 0.05)
}
