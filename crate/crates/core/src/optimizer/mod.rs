//! Derivative-free bounded minimization: a controlled random search with
//! local mutation followed by a trust-region method on a quadratic model
//! interpolating `2P + 1` points, orchestrated over independent restarts.

mod crs;
mod local;
mod problem;
mod train;
mod trust;

pub use crs::{crs_global, population_size};
pub use local::local_refine;
pub use problem::{freeze_corrections, BoundedProblem, OptimizerConfig};
pub use train::{train, TracePoint, TrainOutcome, TrainRecord};
