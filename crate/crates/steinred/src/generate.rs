//! Seeded random instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinred_core::{InstanceBuilder, PcInstance};

/// Parameters of the small random family used by the property suites.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomFamily {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub min_edge_probability: f64,
    pub max_edge_probability: f64,
    pub max_cost: u32,
    pub max_prize: u32,
    /// Chance that a vertex becomes a fixed terminal.
    pub fixed_probability: f64,
}

impl Default for RandomFamily {
    fn default() -> Self {
        Self {
            min_vertices: 6,
            max_vertices: 14,
            min_edge_probability: 0.3,
            max_edge_probability: 0.7,
            max_cost: 10,
            max_prize: 10,
            fixed_probability: 0.0,
        }
    }
}

impl RandomFamily {
    pub fn with_vertices(mut self, min: usize, max: usize) -> Self {
        self.min_vertices = min;
        self.max_vertices = max;
        self
    }

    pub fn with_fixed_probability(mut self, p: f64) -> Self {
        self.fixed_probability = p;
        self
    }

    /// Connected Erdős–Rényi graph with integer costs and prizes. Graphs
    /// that come out disconnected are redrawn from the same stream.
    pub fn generate(&self, seed: u64) -> PcInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let n = rng.gen_range(self.min_vertices..=self.max_vertices);
            let p = rng.gen_range(self.min_edge_probability..=self.max_edge_probability);
            let mut b = InstanceBuilder::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        b.edge(u, v, rng.gen_range(1..=self.max_cost) as f64);
                    }
                }
            }
            for v in 0..n {
                b.prize(v, rng.gen_range(0..=self.max_prize) as f64);
                if self.fixed_probability > 0.0 && rng.gen_bool(self.fixed_probability) {
                    b.fixed(v);
                }
            }
            if let Ok(inst) = b.build() {
                return inst;
            }
        }
    }
}

/// Sparse geometric instance: points in a square of side 1000, each joined
/// to its `neighbors` nearest points (costs are rounded distances, at least
/// 1), plus a spanning chain in x-order so the graph is connected. A
/// `terminal_share` fraction of the vertices gets a prize drawn from
/// `[1, max_prize]`.
pub fn geometric(
    n: usize,
    neighbors: usize,
    terminal_share: f64,
    max_prize: u32,
    seed: u64,
) -> PcInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0)))
        .collect();
    let dist = |a: usize, b: usize| {
        let (dx, dy) = (points[a].0 - points[b].0, points[a].1 - points[b].1);
        (dx * dx + dy * dy).sqrt().round().max(1.0)
    };
    let mut b = InstanceBuilder::new(n);
    for u in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&v| v != u).collect();
        others.sort_by(|&x, &y| dist(u, x).total_cmp(&dist(u, y)).then(x.cmp(&y)));
        for &v in others.iter().take(neighbors) {
            b.edge(u.min(v), u.max(v), dist(u, v));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| points[x].0.total_cmp(&points[y].0).then(x.cmp(&y)));
    for w in order.windows(2) {
        b.edge(w[0].min(w[1]), w[0].max(w[1]), dist(w[0], w[1]));
    }
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut rng);
    let count = (n as f64 * terminal_share).round() as usize;
    for &v in ids.iter().take(count) {
        b.prize(v, rng.gen_range(1..=max_prize) as f64);
    }
    b.build().expect("chain keeps the graph connected")
}
