#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinred_core::{InstanceBuilder, PcInstance};

/// Connected random graph with `n` in `vertices`, edge probability in
/// [0.3, 0.7], integer costs 1-10 and prizes 0-10; each vertex is fixed
/// with probability `fixed`.
pub fn random_instance(seed: u64, vertices: (usize, usize), fixed: f64) -> PcInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(vertices.0..=vertices.1);
        let p = rng.gen_range(0.3..=0.7);
        let mut b = InstanceBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    b.edge(u, v, rng.gen_range(1..=10) as f64);
                }
            }
        }
        for v in 0..n {
            b.prize(v, rng.gen_range(0..=10) as f64);
            if fixed > 0.0 && rng.gen_bool(fixed) {
                b.fixed(v);
            }
        }
        if let Ok(inst) = b.build() {
            return inst;
        }
    }
}

/// The suite family: 6-14 vertices, no fixed terminals.
pub fn suite(seed: u64) -> PcInstance {
    random_instance(seed, (6, 14), 0.0)
}

/// The suite family with some fixed terminals.
pub fn rooted_suite(seed: u64) -> PcInstance {
    random_instance(seed, (6, 14), 0.15)
}

/// Random tree on 2-4 vertices plus at most one extra edge, with `fixed`
/// fixed terminals; terminals are dropped until the transformation has at
/// most `max_arcs` arcs.
pub fn tiny_instance(seed: u64, fixed: usize, max_arcs: usize) -> PcInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(fixed.max(2)..=4);
        let mut b = InstanceBuilder::new(n);
        let mut pairs = Vec::new();
        for v in 1..n {
            pairs.push((rng.gen_range(0..v), v));
        }
        if n > 2 && rng.gen_bool(0.5) {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v && !pairs.contains(&(u.min(v), u.max(v))) {
                pairs.push((u.min(v), u.max(v)));
            }
        }
        for &(u, v) in &pairs {
            b.edge(u, v, rng.gen_range(1..=6) as f64);
        }
        let per_open = if fixed == 0 { 4 } else { 2 };
        let mut arcs = 2 * pairs.len();
        let mut any = false;
        for v in 0..n {
            if v < fixed {
                b.fixed(v);
            } else if arcs + per_open <= max_arcs && rng.gen_bool(0.7) {
                b.prize(v, rng.gen_range(1..=8) as f64);
                arcs += per_open;
                any = true;
            }
        }
        if arcs > max_arcs || (fixed == 0 && !any) {
            continue;
        }
        if let Ok(inst) = b.build() {
            return inst;
        }
    }
}
