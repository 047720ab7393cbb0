//! Multi-query optimization by ratio-greedy maximization of a normalized,
//! possibly negative, submodular materialization benefit.
//!
//! - [`setfn`]: subsets, set functions and monotone-minus-additive decompositions.
//! - [`solvers`]: ratio greedy (eager and lazy), cost greedy, brute force,
//!   universe reduction and the approximation bound.
//! - [`qdag`]: the combined AND-OR DAG of a query batch.
//! - [`costing`]: cost models, best-cost dynamic programs and the benefit oracle.
//! - [`instances`]: coverage instances and synthetic workloads.
//! - [`workload`]: the JSON workload format.
//! - [`optimize`]: one algorithm run against a prepared workload.
//! - [`cli`]: the `mqo` command line.

pub mod cli;
pub mod costing;
pub mod error;
pub mod instances;
pub mod optimize;
pub mod qdag;
pub mod setfn;
pub mod solvers;
pub mod workload;

pub use error::{Error, Result};
