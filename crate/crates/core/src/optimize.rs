//! End-to-end optimization of a prepared workload with one algorithm.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qdag::EqId;
use crate::setfn::{canonical_decomposition, SetFunction, Subset};
use crate::solvers::{
    exhaustive_max, lazy_marginal_greedy, marginal_greedy, roy_greedy, universe_reduce, GreedyOptions, SolverResult,
};
use crate::workload::PreparedWorkload;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Marginal,
    Lazy,
    Roy,
    Exhaustive,
    /// No materialization: every query planned on its own.
    None,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::None,
        Algorithm::Roy,
        Algorithm::Marginal,
        Algorithm::Lazy,
        Algorithm::Exhaustive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Marginal => "marginal",
            Algorithm::Lazy => "lazy",
            Algorithm::Roy => "roy",
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::None => "none",
        }
    }

    pub fn uses_cap(self) -> bool {
        matches!(self, Algorithm::Marginal | Algorithm::Lazy)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Cardinality cap; the ratio-greedy solvers first shrink the candidates for it.
    pub k: Option<usize>,
    pub prune: bool,
}

/// Outcome of one optimization run.
#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub algorithm: Algorithm,
    pub materialized: Vec<EqId>,
    pub labels: Vec<String>,
    pub bc_empty: f64,
    pub bc_chosen: f64,
    pub mb_chosen: f64,
    pub use_cost: f64,
    pub materialization_cost: f64,
    pub shareable: usize,
    /// Candidates left after universe reduction.
    pub candidates: usize,
    /// Distinct materialized sets whose cost was requested.
    pub oracle_calls: usize,
    /// Best-cost DP runs, the baseline included.
    pub bc_evaluations: usize,
    #[serde(skip)]
    pub solver: SolverResult,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn no_solver(n: usize) -> SolverResult {
    SolverResult {
        chosen: Subset::empty(n),
        objective: 0.0,
        trace: Vec::new(),
        oracle_calls: 0,
    }
}

/// Runs `algorithm` against the workload's benefit oracle.
///
/// The oracle's cache persists across runs, so call counts are only
/// meaningful on a freshly prepared workload.
pub fn run(prepared: &PreparedWorkload, algorithm: Algorithm, opts: RunOptions) -> Result<Outcome> {
    let benefit = &prepared.benefit;
    let n = benefit.universe_size();
    if let Some(k) = opts.k {
        if !algorithm.uses_cap() {
            return Err(Error::InvalidArgument(format!(
                "a cardinality cap does not apply to {algorithm}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("cardinality cap must be at least 1".into()));
        }
    }
    let start = Instant::now();
    let full = Subset::full(n);
    let mut candidates = full.clone();
    let solver = match algorithm {
        Algorithm::Marginal | Algorithm::Lazy => {
            let mb: Arc<dyn SetFunction> = benefit.clone();
            let d = canonical_decomposition(mb)?;
            if let Some(k) = opts.k.filter(|&k| k < n) {
                candidates = universe_reduce(&d, &full, k)?;
            }
            let greedy = GreedyOptions {
                k: opts.k,
                prune: opts.prune,
            };
            if algorithm == Algorithm::Marginal {
                marginal_greedy(&d, &candidates, greedy)
            } else {
                lazy_marginal_greedy(&d, &candidates, greedy)
            }
        }
        Algorithm::Roy => roy_greedy(&benefit.best_cost_fn(), &full),
        Algorithm::Exhaustive => exhaustive_max(&**benefit, &full)?,
        Algorithm::None => no_solver(n),
    };
    let elapsed = start.elapsed();

    let chosen = &solver.chosen;
    let report = benefit.report(chosen)?;
    let bc_chosen = benefit.bc(chosen);
    Ok(Outcome {
        algorithm,
        materialized: benefit.nodes_of(chosen),
        labels: chosen.iter().map(|i| benefit.labels()[i].clone()).collect(),
        bc_empty: benefit.baseline(),
        bc_chosen,
        mb_chosen: benefit.baseline() - bc_chosen,
        use_cost: report.use_cost,
        materialization_cost: report.materialization_cost,
        shareable: n,
        candidates: candidates.len(),
        oracle_calls: benefit.distinct_bc_requests(),
        bc_evaluations: benefit.bc_evaluations(),
        solver,
        elapsed,
    })
}
