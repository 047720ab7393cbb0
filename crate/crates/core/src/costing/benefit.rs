use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use super::dp::{CostReport, Costing};
use crate::error::Result;
use crate::qdag::{shareable_nodes, EqId};
use crate::setfn::{SetFunction, Subset};

/// Materialization benefit `mb(S) = bc(∅) − bc(S)` over a fixed set of
/// candidate nodes. Element `i` of the ground set is node `universe()[i]`.
///
/// `bc(∅)` is computed once at construction. Every other distinct `bc`
/// value is computed once and cached.
#[derive(Debug)]
pub struct BenefitOracle {
    costing: Arc<Costing>,
    universe: Vec<EqId>,
    labels: Vec<String>,
    baseline: f64,
    cache: Mutex<HashMap<Subset, f64>>,
    runs: AtomicUsize,
}

impl BenefitOracle {
    /// Oracle over the shareable nodes of the costed DAG.
    pub fn new(costing: Arc<Costing>) -> Result<Self> {
        let universe = shareable_nodes(costing.dag());
        Self::with_universe(costing, universe)
    }

    /// Oracle over an explicit candidate list. Every candidate must be priced
    /// for reading and writing, so later evaluations cannot fail.
    pub fn with_universe(costing: Arc<Costing>, universe: Vec<EqId>) -> Result<Self> {
        costing.best_cost(&universe)?;
        let baseline = costing.total_cost(&[])?;
        let labels = universe.iter().map(|&e| costing.dag().label(e)).collect();
        Ok(BenefitOracle {
            costing,
            universe,
            labels,
            baseline,
            cache: Mutex::new(HashMap::new()),
            runs: AtomicUsize::new(1),
        })
    }

    pub fn costing(&self) -> &Arc<Costing> {
        &self.costing
    }

    pub fn universe(&self) -> &[EqId] {
        &self.universe
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `bc(∅)`, the cost without any materialization.
    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    pub fn nodes_of(&self, s: &Subset) -> Vec<EqId> {
        s.iter().map(|i| self.universe[i]).collect()
    }

    /// `bc(S)`, cached.
    pub fn bc(&self, s: &Subset) -> f64 {
        if let Some(&v) = self.cache.lock().unwrap().get(s) {
            return v;
        }
        let value = if s.is_empty() {
            self.baseline
        } else {
            self.runs.fetch_add(1, Ordering::Relaxed);
            self.costing
                .total_cost(&self.nodes_of(s))
                .expect("candidates were priced at construction")
        };
        self.cache.lock().unwrap().insert(s.clone(), value);
        value
    }

    /// Full breakdown of `bc(S)`; not cached and not counted.
    pub fn report(&self, s: &Subset) -> Result<CostReport> {
        self.costing.best_cost(&self.nodes_of(s))
    }

    /// Number of DP runs so far, the baseline included.
    pub fn bc_evaluations(&self) -> usize {
        self.runs.load(Ordering::Relaxed)
    }

    /// Number of distinct sets whose `bc` has been requested.
    pub fn distinct_bc_requests(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    /// Every set whose `bc` has been requested, in lexicographic bit order.
    pub fn requested_sets(&self) -> Vec<Subset> {
        let mut sets: Vec<Subset> = self.cache.lock().unwrap().keys().cloned().collect();
        sets.sort_by(Subset::lex_cmp);
        sets
    }

    /// `bc` itself as a set function, sharing this oracle's cache.
    pub fn best_cost_fn(self: &Arc<Self>) -> BestCost {
        BestCost(Arc::clone(self))
    }
}

impl SetFunction for BenefitOracle {
    fn universe_size(&self) -> usize {
        self.universe.len()
    }

    fn eval(&self, s: &Subset) -> f64 {
        let bc = self.bc(s);
        if s.is_empty() {
            0.0
        } else {
            self.baseline - bc
        }
    }

    fn normalized_by_construction(&self) -> bool {
        true
    }
}

/// `S ↦ bc(S)` over a benefit oracle's candidates.
#[derive(Debug, Clone)]
pub struct BestCost(Arc<BenefitOracle>);

impl SetFunction for BestCost {
    fn universe_size(&self) -> usize {
        self.0.universe_size()
    }

    fn eval(&self, s: &Subset) -> f64 {
        self.0.bc(s)
    }
}
