//! Seeded instance generators: profitted coverage with a planted optimum,
//! random coverage-minus-cost functions and batched join workloads.

mod beta;
mod coverage;
mod joins;
mod random;

pub use beta::{beta_objective, beta_optimum_check};
pub use coverage::{
    gen_planted_cover, planted_bound, profitted_oracle, CoverageInstance, ProfittedCoverage, ScaledCoverage,
};
pub use joins::gen_join_workload;
pub use random::{gen_random_submodular, RandomParams};
