//! Selection algorithms over set functions.
//!
//! [`marginal_greedy`] and [`lazy_marginal_greedy`] maximize `f = f_M − c` by
//! the gain-to-cost ratio rule, [`roy_greedy`] minimizes a cost oracle
//! directly, and [`exhaustive_max`] is the brute-force reference.
//!
//! Ties on ratio or cost always go to the smallest element id.

mod bound;
mod exhaustive;
mod marginal;
mod reduce;
mod roy;

use serde::{Serialize, Serializer};

use crate::setfn::{ElementId, Subset};

pub use bound::{approx_bound, Bound};
pub use exhaustive::{exhaustive_max, EXHAUSTIVE_MAX_LIMIT};
pub use marginal::{lazy_marginal_greedy, marginal_greedy, GreedyOptions};
pub use reduce::universe_reduce;
pub use roy::roy_greedy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    MainLoop,
    NegativeCostSweep,
}

/// One accepted element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub element: ElementId,
    /// `f_M'(x, X) / c(x)` at the time of acceptance; absent for the negative-cost
    /// sweep and for cost-driven solvers.
    #[serde(serialize_with = "ratio_json")]
    pub ratio: Option<f64>,
    /// Objective value after accepting `element`. For cost oracles this is the cost.
    pub f_value_after: f64,
    pub f_m_value_after: Option<f64>,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverResult {
    pub chosen: Subset,
    pub objective: f64,
    pub trace: Vec<IterationRecord>,
    /// Distinct subsets the solver evaluated.
    pub oracle_calls: usize,
}

impl SolverResult {
    pub fn accepted(&self) -> Vec<ElementId> {
        self.trace.iter().map(|r| r.element).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solver results always serialize")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

// JSON has no infinity; zero-cost picks carry an infinite ratio.
fn ratio_json<S: Serializer>(ratio: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match ratio {
        Some(r) if r.is_infinite() && *r > 0.0 => serializer.serialize_str("inf"),
        Some(r) => serializer.serialize_f64(*r),
        None => serializer.serialize_none(),
    }
}

/// Gain-to-cost ratio with the zero-cost convention: positive gain at zero
/// cost is infinitely attractive, zero gain is never taken.
pub(crate) fn ratio(gain: f64, cost: f64) -> f64 {
    if cost > 0.0 {
        gain / cost
    } else if gain > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}
