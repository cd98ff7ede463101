mod common;

use common::{rooted_suite, suite};
use steinred_core::events::retransform_solution;
use steinred_core::oracle::brute_force_opt;
use steinred_core::{evaluate_cost, reduce_loop, ReduceConfig, Safety};

#[test]
fn reduction_preserves_the_optimum_and_brackets_it() {
    for seed in 0..500 {
        for inst in [suite(seed), rooted_suite(seed)] {
            let opt = brute_force_opt(&inst, false).unwrap().optimum;
            let r = reduce_loop(&inst, &ReduceConfig::default());
            assert!(
                r.lower_bound <= opt + 1e-9 && opt <= r.upper_bound + 1e-9,
                "seed {seed}"
            );
            let reduced = brute_force_opt(&r.instance, false).unwrap();
            assert_eq!(reduced.optimum, opt, "seed {seed}");
            let back = retransform_solution(&r.log, &inst, &reduced.tree).unwrap();
            assert!(
                evaluate_cost(&inst, &back).unwrap() <= opt + 1e-9,
                "seed {seed}"
            );
            assert_eq!(r.log.replay(&inst).unwrap(), r.instance, "seed {seed}");
        }
    }
}

#[test]
fn safety_classes_follow_the_configuration() {
    let equality = ReduceConfig {
        equality_mode: true,
        ..ReduceConfig::default()
    };
    for seed in 0..500 {
        let inst = rooted_suite(seed);
        let strict = reduce_loop(&inst, &ReduceConfig::default());
        assert!(
            strict
                .log
                .events
                .iter()
                .all(|e| e.safety() == Safety::AllOptima),
            "seed {seed}"
        );
        let opt = brute_force_opt(&inst, false).unwrap().optimum;
        let loose = reduce_loop(&inst, &equality);
        assert_eq!(
            brute_force_opt(&loose.instance, false).unwrap().optimum,
            opt,
            "seed {seed}"
        );
    }
}

#[test]
fn problem_class_only_moves_towards_steiner() {
    for seed in 0..500 {
        for inst in [suite(seed), rooted_suite(seed)] {
            let r = reduce_loop(&inst, &ReduceConfig::default());
            assert!(r.instance.class() >= inst.class(), "seed {seed}");
        }
    }
}

#[test]
fn second_reduction_keeps_the_optimum() {
    let mut idle = 0;
    for seed in 0..200 {
        let inst = suite(seed);
        let once = reduce_loop(&inst, &ReduceConfig::default());
        let twice = reduce_loop(&once.instance, &ReduceConfig::default());
        idle += usize::from(twice.log.is_empty());
        let opt = brute_force_opt(&inst, false).unwrap().optimum;
        assert_eq!(
            brute_force_opt(&twice.instance, false).unwrap().optimum,
            opt,
            "seed {seed}"
        );
    }
    println!("{idle} of 200 reduced instances admit no further reduction");
}
