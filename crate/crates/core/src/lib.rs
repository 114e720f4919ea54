//! Static scheduling of precedence-constrained task graphs onto heterogeneous,
//! fully connected processors with a hybrid heuristic artificial immune system.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`graph`]: task DAGs with a zero-cost virtual entry task, validation and
//!   deterministic generators (random layered, Gaussian elimination).
//! * [`platform`]: processor count and the symmetric communication-rate matrix.
//! * [`decoder`]: turns a processor assignment ("antibody") into a timed
//!   schedule using b-level/rank priorities and optional single neighbourhood
//!   search (gap filling).
//! * [`ais`]: the clonal-selection / immune-remove optimizer.
//! * [`oracle`]: exhaustive assignment search and a greedy list-scheduling
//!   baseline.
//!
//! File formats, reports and the CLI live in the `clonesched` crate.
//!
//! ```
//! use clonesched_core::decoder::{decode, Antibody};
//! use clonesched_core::graph::{add_virtual_entry, Edge, RawDag, RawTask};
//! use clonesched_core::platform::Platform;
//!
//! let raw = RawDag {
//!     procs: 2,
//!     tasks: vec![
//!         RawTask::new(1, vec![2.0, 4.0]),
//!         RawTask::new(2, vec![3.0, 3.0]),
//!     ],
//!     edges: vec![Edge::new(0, 1, 10.0)],
//! };
//! let graph = add_virtual_entry(raw).unwrap();
//! let platform = Platform::uniform(2, 1.0).unwrap();
//!
//! let schedule = decode(&graph, &platform, &Antibody::new(vec![0, 1]), false);
//! assert_eq!(schedule.makespan(), 2.0 + 10.0 + 3.0);
//! ```
#![no_std]

extern crate alloc;

pub mod ais;
pub mod decoder;
pub mod exec;
pub mod graph;
pub mod oracle;
pub mod platform;
pub mod rng;

/// Absolute tolerance used when comparing times for ties and validity checks.
pub const TIME_EPS: f64 = 1e-9;

/// Time units and data volumes are plain non-negative floats.
pub type Time = f64;

pub use ais::{optimize, optimize_with, OptimizeResult, OptimizerConfig, RunHistory};
pub use decoder::{decode, Antibody, Schedule};
pub use graph::{add_virtual_entry, TaskGraph};
pub use platform::Platform;
