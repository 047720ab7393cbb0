//! Pricing the DAG and the best-cost dynamic program.
//!
//! For a materialized set `S`, `bc(S) = buc(S) + c(S)`: the best use cost
//! answers the batch reading members of `S` where that is cheaper, and `c(S)`
//! computes and writes every member, each one free to read members below it.

mod benefit;
mod cardinality;
mod dp;
mod model;
mod report;

pub use benefit::{BenefitOracle, BestCost};
pub use cardinality::estimate_cardinality;
pub use dp::{CostReport, Costing, MaterializedCost, NodeChoice, NodeCost, PlanChoice};
pub use model::{AnalyticalParams, CostModel, FixtureCosts, PriceTable, Prices};
pub use report::{supermodularity_report, SupermodularityReport, EXHAUSTIVE_REPORT_LIMIT};
