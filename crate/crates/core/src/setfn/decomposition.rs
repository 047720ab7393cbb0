//! Monotone-minus-additive decompositions `f = f_M − c`.

use std::fmt;
use std::sync::Arc;

use super::{SetFunction, Subset, TOLERANCE};
use crate::error::{Error, Result};

/// The monotone part of a decomposition, held lazily as `base(S) + Σ_{e∈S} offset[e]`.
///
/// Keeping the additive shift separate from `base` lets shifts compose without
/// re-evaluating anything and keeps repeated shifts bit-stable.
#[derive(Clone)]
pub struct MonotonePart {
    base: Arc<dyn SetFunction>,
    offset: Vec<f64>,
}

impl MonotonePart {
    pub fn new(base: Arc<dyn SetFunction>) -> Self {
        let n = base.universe_size();
        MonotonePart {
            base,
            offset: vec![0.0; n],
        }
    }

    pub fn base(&self) -> &Arc<dyn SetFunction> {
        &self.base
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// `f_M(U) − f_M(U ∖ {e})`.
    fn drop_at_top(&self, full_value: f64, e: usize) -> f64 {
        let full = Subset::full(self.offset.len());
        (full_value - self.base.eval(&full.without(e))) + self.offset[e]
    }
}

impl SetFunction for MonotonePart {
    fn universe_size(&self) -> usize {
        self.offset.len()
    }

    fn eval(&self, set: &Subset) -> f64 {
        let shift: f64 = set.iter().map(|e| self.offset[e]).sum();
        self.base.eval(set) + shift
    }

    fn normalized_by_construction(&self) -> bool {
        self.base.normalized_by_construction()
    }
}

impl fmt::Debug for MonotonePart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotonePart")
            .field("n", &self.offset.len())
            .field("offset", &self.offset)
            .finish()
    }
}

/// `f(S) = f_M(S) − Σ_{e∈S} cost[e]`. Costs may be zero or negative.
#[derive(Clone, Debug)]
pub struct Decomposition {
    f_m: MonotonePart,
    cost: Vec<f64>,
}

impl Decomposition {
    pub fn new(f_m: Arc<dyn SetFunction>, cost: Vec<f64>) -> Result<Self> {
        Decomposition::from_parts(MonotonePart::new(f_m), cost)
    }

    pub fn from_parts(f_m: MonotonePart, cost: Vec<f64>) -> Result<Self> {
        if f_m.universe_size() != cost.len() {
            return Err(Error::InvalidArgument(format!(
                "monotone part has {} elements but {} cost weights were given",
                f_m.universe_size(),
                cost.len()
            )));
        }
        Ok(Decomposition { f_m, cost })
    }

    pub fn universe_size(&self) -> usize {
        self.cost.len()
    }

    pub fn f_m(&self) -> &MonotonePart {
        &self.f_m
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn cost_of(&self, set: &Subset) -> f64 {
        set.iter().map(|e| self.cost[e]).sum()
    }

    /// The represented function `f(S)`.
    pub fn value(&self, set: &Subset) -> f64 {
        self.f_m.eval(set) - self.cost_of(set)
    }
}

impl SetFunction for Decomposition {
    fn universe_size(&self) -> usize {
        self.cost.len()
    }

    fn eval(&self, set: &Subset) -> f64 {
        self.value(set)
    }

    fn normalized_by_construction(&self) -> bool {
        self.f_m.normalized_by_construction()
    }
}

/// Builds `c*[e] = f(U ∖ {e}) − f(U)` and `f_M*(S) = f(S) + c*(S)`.
///
/// Fills the weights with exactly `n + 1` evaluations of `f`. Unless `f` is
/// normalized by construction, one extra evaluation probes `f(∅)`.
pub fn canonical_decomposition(f: Arc<dyn SetFunction>) -> Result<Decomposition> {
    let n = f.universe_size();
    if !f.normalized_by_construction() {
        let at_empty = f.eval(&Subset::empty(n));
        if at_empty.abs() > TOLERANCE {
            return Err(Error::NotNormalized { value: at_empty });
        }
    }
    if n == 0 {
        return Decomposition::new(f, Vec::new());
    }
    let full = Subset::full(n);
    let top = f.eval(&full);
    let cost: Vec<f64> = (0..n).map(|e| f.eval(&full.without(e)) - top).collect();
    let f_m = MonotonePart {
        base: f,
        offset: cost.clone(),
    };
    Decomposition::from_parts(f_m, cost)
}

/// Shifts out the largest additive part that keeps `f_M` monotone:
/// `w[i] = f_M(U) − f_M(U ∖ {i})`, `f̃_M = f_M − w`, `c̃ = c − w`.
///
/// The canonical decomposition is a fixed point.
pub fn improve_decomposition(d: &Decomposition) -> Decomposition {
    let n = d.universe_size();
    if n == 0 {
        return d.clone();
    }
    let base_top = d.f_m.base.eval(&Subset::full(n));
    let shift: Vec<f64> = (0..n).map(|e| d.f_m.drop_at_top(base_top, e)).collect();
    let offset = d.f_m.offset.iter().zip(&shift).map(|(o, w)| o - w).collect();
    let cost = d.cost.iter().zip(&shift).map(|(c, w)| c - w).collect();
    Decomposition {
        f_m: MonotonePart {
            base: Arc::clone(&d.f_m.base),
            offset,
        },
        cost,
    }
}
