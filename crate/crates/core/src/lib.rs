//! Reduction techniques and an exact branch-and-bound solver for the
//! prize-collecting Steiner tree problem and its rooted variant.
//!
//! The crate is `no_std` (with `alloc`); the `std` feature only enables
//! standard-library conveniences. File formats and the command-line tool
//! live in the `steinred` crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod bnb;
pub mod distance;
pub mod dual_ascent;
pub mod error;
pub mod events;
pub mod heuristics;
pub mod model;
pub mod oracle;
pub mod reduce;
pub mod regions;
pub mod transform;
pub mod walk;

#[cfg(feature = "audit")]
pub mod audit;

pub use bnb::{solve, SolveConfig, SolveResult, SolveStats};
pub use error::{
    HeuristicError, LogError, ModelError, OracleError, RegionError, SapError, WalkError,
};
pub use events::{retransform_solution, EventLog, ReductionEvent, Safety};
pub use model::{
    evaluate_cost, Cost, EdgeId, InstanceBuilder, PcInstance, ProblemClass, SteinerTree, VertexId,
};
pub use reduce::{reduce_loop, ReduceConfig, ReduceOutcome};
