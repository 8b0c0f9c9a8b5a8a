//! TSP solver laboratory: instance I/O, metaheuristic, reinforcement
//! learning, constructive and exact solvers, parameter tuning, benchmark
//! campaigns, and a prompt-refinement protocol.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithm;
pub mod bench;
pub mod constructive;
pub mod exact;
pub mod instance;
pub mod meta;
pub mod refine;
pub mod rl;
pub mod rng;
pub mod solve;
pub mod tour;
pub mod tuner;

pub use algorithm::{run_algorithm, Algorithm, ParamValues, RunOutcome, Variant};
pub use instance::{build_distance_matrix, DistanceMatrix, Instance, Rounding};
pub use solve::{SolveBudget, SolveResult};
pub use tour::{tour_length, Tour};
