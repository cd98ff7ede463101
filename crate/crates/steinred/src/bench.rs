//! Batch runs over a directory of `.stp` files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;
use steinred_core::{solve, Cost, SolveConfig};

use crate::stp::parse_stp;

pub const CSV_HEADER: [&str; 9] = [
    "name",
    "vertices",
    "edges",
    "lower_bound",
    "upper_bound",
    "optimal",
    "time",
    "nodes",
    "reductions",
];

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub jobs: usize,
    pub time_limit: Option<Duration>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub lower_bound: Cost,
    pub upper_bound: Cost,
    pub optimal: bool,
    pub seconds: f64,
    pub nodes: usize,
    /// Events of the root reduction.
    pub reductions: usize,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    /// One row per solved instance, sorted by name.
    pub rows: Vec<BenchRow>,
    /// Files that could not be read or parsed.
    pub failures: Vec<String>,
}

fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}

impl BenchReport {
    /// Writes the CSV table; every number has six decimals.
    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER)?;
        for r in &self.rows {
            out.write_record([
                r.name.clone(),
                fixed6(r.vertices as f64),
                fixed6(r.edges as f64),
                fixed6(r.lower_bound),
                fixed6(r.upper_bound),
                r.optimal.to_string(),
                fixed6(r.seconds),
                fixed6(r.nodes as f64),
                fixed6(r.reductions as f64),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn bench_file(path: &Path, time_limit: Option<Duration>) -> Result<BenchRow, String> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let text = fs::read_to_string(path).map_err(|e| format!("{name}: {e}"))?;
    let inst = parse_stp(&text).map_err(|e| format!("{name}: {e}"))?;
    let start = Instant::now();
    let stop = || time_limit.is_some_and(|l| start.elapsed() >= l);
    let r = solve(&inst, &SolveConfig::default(), &stop);
    let seconds = start.elapsed().as_secs_f64();
    info!(
        "{name}: LB {} UB {} in {seconds:.3}s",
        r.lower_bound, r.upper_bound
    );
    Ok(BenchRow {
        name,
        vertices: inst.vertex_count(),
        edges: inst.edge_count(),
        lower_bound: r.lower_bound,
        upper_bound: r.upper_bound,
        optimal: r.optimal,
        seconds,
        nodes: r.stats.nodes,
        reductions: r.stats.root_events.iter().sum(),
    })
}

/// Solves every `.stp` file of `dir` on `jobs` threads.
pub fn bench_dir(dir: &Path, options: &BenchOptions) -> Result<BenchReport, String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("stp")))
        .collect();
    files.sort();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| e.to_string())?;
    let results: Vec<Result<BenchRow, String>> = pool.install(|| {
        files
            .par_iter()
            .map(|p| bench_file(p, options.time_limit))
            .collect()
    });
    let mut report = BenchReport::default();
    for r in results {
        match r {
            Ok(row) => report.rows.push(row),
            Err(e) => {
                warn!("{e}");
                report.failures.push(e);
            }
        }
    }
    Ok(report)
}
