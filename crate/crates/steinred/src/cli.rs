//! Command-line front end. [`run`] returns the process exit code: 0 on
//! success, 1 on usage errors, 2 on unreadable input or infeasibility.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use log::{debug, info, warn};
use steinred_core::heuristics::best_heuristic_tree;
use steinred_core::reduce::instance_lower_bound;
use steinred_core::{evaluate_cost, reduce_loop, solve, PcInstance, ReduceConfig, SolveConfig};

use crate::bench::{bench_dir, BenchOptions};
use crate::eventlog::write_event_log;
use crate::solution::{parse_solution, write_solution};
use crate::stp::{parse_stp, write_stp};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "steinred",
    version,
    about = "Reduce and solve prize-collecting Steiner tree instances"
)]
struct Cli {
    /// Seed for randomised components; all current algorithms are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce an instance and write the reduced instance and its event log.
    Reduce(ReduceArgs),
    /// Solve an instance to optimality or until the time limit.
    Solve(SolveArgs),
    /// Print a dual-ascent lower bound and a heuristic upper bound.
    Bounds(InputArgs),
    /// Validate and price a solution file.
    Check(CheckArgs),
    /// Solve every `.stp` file of a directory and write one CSV row each.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    #[arg(long, value_name = "FILE")]
    log: PathBuf,
    /// Edge-scan budget of every walk search.
    #[arg(long, value_name = "N")]
    budget: Option<usize>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Wall-clock limit in seconds.
    #[arg(long, value_name = "S")]
    time_limit: Option<f64>,
    #[arg(long, value_name = "FILE")]
    sol: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "FILE")]
    sol: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_name = "DIR")]
    dir: PathBuf,
    #[arg(long, value_name = "FILE")]
    csv: PathBuf,
    /// Instances solved in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Wall-clock limit per instance in seconds.
    #[arg(long, value_name = "S")]
    time_limit: Option<f64>,
}

/// A failed command: the message for stderr and the exit code.
struct Failure(i32, String);

fn fail(msg: impl Into<String>) -> Failure {
    Failure(EXIT_FAILURE, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<PcInstance, Failure> {
    parse_stp(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

pub(crate) fn time_limit(seconds: Option<f64>) -> Result<Option<Duration>, String> {
    seconds
        .map(|s| Duration::try_from_secs_f64(s).map_err(|_| format!("invalid time limit {s}")))
        .transpose()
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    debug!("seed {}", cli.seed);
    let result = match cli.command {
        Command::Reduce(a) => reduce_cmd(a, out),
        Command::Solve(a) => solve_cmd(a, out),
        Command::Bounds(a) => bounds_cmd(a, out),
        Command::Check(a) => check_cmd(a, out),
        Command::Bench(a) => bench_cmd(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn reduce_cmd(a: ReduceArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inst = load(&a.input.input)?;
    let mut config = ReduceConfig::default();
    if let Some(b) = a.budget {
        config = config.with_edge_budget(b);
    }
    let start = Instant::now();
    let r = reduce_loop(&inst, &config);
    info!("reduced in {:?}", start.elapsed());
    if !r.instance.is_connected() {
        warn!("the reduced instance has several components; the solution lies in one of them");
    }
    write(&a.out, &write_stp(&r.instance))?;
    write(&a.log, &write_event_log(&r.log))?;
    let _ = writeln!(
        out,
        "vertices {} -> {}",
        inst.vertex_count(),
        r.instance.vertex_count()
    );
    let _ = writeln!(
        out,
        "edges {} -> {}",
        inst.edge_count(),
        r.instance.edge_count()
    );
    let _ = writeln!(out, "offset {}", r.instance.offset());
    let _ = writeln!(out, "events {}", r.log.len());
    let _ = writeln!(out, "rounds {}", r.rounds);
    let _ = writeln!(out, "LB {}", r.lower_bound);
    let _ = writeln!(out, "UB {}", r.upper_bound);
    Ok(())
}

fn solve_cmd(a: SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inst = load(&a.input.input)?;
    let limit = time_limit(a.time_limit).map_err(|m| Failure(EXIT_USAGE, m))?;
    let start = Instant::now();
    let stop = || limit.is_some_and(|l| start.elapsed() >= l);
    let r = solve(&inst, &SolveConfig::default(), &stop);
    let elapsed = start.elapsed();
    let Some(tree) = r.tree else {
        return Err(fail("no feasible solution found"));
    };
    let value = evaluate_cost(&inst, &tree).map_err(|e| fail(format!("solution invalid: {e}")))?;
    let _ = writeln!(out, "LB {}", r.lower_bound);
    let _ = writeln!(out, "UB {}", r.upper_bound);
    let _ = writeln!(out, "optimal {}", r.optimal);
    let _ = writeln!(out, "nodes {}", r.stats.nodes);
    let _ = writeln!(
        out,
        "edges {} -> {}",
        r.stats.edges_before, r.stats.edges_after
    );
    let _ = writeln!(out, "time {:.6}", elapsed.as_secs_f64());
    if let Some(path) = a.sol {
        write(&path, &write_solution(&inst, &tree, value))?;
    }
    Ok(())
}

fn bounds_cmd(a: InputArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inst = load(&a.input)?;
    let lb = instance_lower_bound(&inst);
    let ub = match best_heuristic_tree(&inst) {
        Some(tree) => {
            evaluate_cost(&inst, &tree).map_err(|e| fail(format!("heuristic tree invalid: {e}")))?
        }
        None => inst.total_prize() + inst.offset(),
    };
    let _ = writeln!(out, "LB {lb}");
    let _ = writeln!(out, "UB {ub}");
    Ok(())
}

fn check_cmd(a: CheckArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inst = load(&a.input.input)?;
    let sol = parse_solution(&inst, &read(&a.sol)?)
        .map_err(|e| fail(format!("{}: {e}", a.sol.display())))?;
    let value =
        evaluate_cost(&inst, &sol.tree).map_err(|e| fail(format!("invalid solution: {e}")))?;
    if (value - sol.value).abs() > 1e-6 * value.abs().max(1.0) {
        return Err(fail(format!(
            "declared value {} differs from computed value {value}",
            sol.value
        )));
    }
    let _ = writeln!(out, "valid true");
    let _ = writeln!(out, "Value {value}");
    Ok(())
}

fn bench_cmd(a: BenchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if a.jobs == 0 {
        return Err(Failure(EXIT_USAGE, "--jobs must be at least 1".into()));
    }
    let limit = time_limit(a.time_limit).map_err(|m| Failure(EXIT_USAGE, m))?;
    let report = bench_dir(
        &a.dir,
        &BenchOptions {
            jobs: a.jobs,
            time_limit: limit,
        },
    )
    .map_err(fail)?;
    let mut csv = Vec::new();
    report
        .write_csv(&mut csv)
        .map_err(|e| fail(e.to_string()))?;
    write(&a.csv, &String::from_utf8_lossy(&csv))?;
    let _ = writeln!(out, "instances {}", report.rows.len());
    if !report.failures.is_empty() {
        return Err(fail(report.failures.join("; ")));
    }
    Ok(())
}
