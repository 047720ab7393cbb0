//! Ground sets, subsets and set functions.
//!
//! Everything the solvers touch goes through [`SetFunction`]: the materialization
//! benefit of a query batch, scaled coverage functions and the synthetic test
//! families all implement it. Element ids are dense integers `0..n`.

mod checks;
mod decomposition;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use checks::{enumerate_values, is_monotone, is_submodular, EXHAUSTIVE_CHECK_LIMIT};
pub use decomposition::{canonical_decomposition, improve_decomposition, Decomposition, MonotonePart};

/// Absolute tolerance used by every floating-point comparison in the crate.
pub const TOLERANCE: f64 = 1e-9;

pub type ElementId = usize;

/// The universe `0..n`, optionally with display labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<Option<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Self {
        GroundSet { labels: vec![None; n] }
    }

    pub fn with_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        GroundSet {
            labels: labels.into_iter().map(|l| Some(l.into())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        0..self.labels.len()
    }

    /// Label of `e`, falling back to its numeric id.
    pub fn label(&self, e: ElementId) -> String {
        match self.labels.get(e) {
            Some(Some(label)) => label.clone(),
            _ => e.to_string(),
        }
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn empty(&self) -> Subset {
        Subset::empty(self.len())
    }
}

/// A subset of a ground set, stored as a bitset whose width equals `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    bits: FixedBitSet,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Subset { bits }
    }

    /// Builds a subset from element ids. Panics if an id is out of range.
    pub fn from_ids<I: IntoIterator<Item = ElementId>>(n: usize, ids: I) -> Self {
        let mut set = Subset::empty(n);
        for id in ids {
            assert!(id < n, "element {id} out of range for universe of size {n}");
            set.bits.insert(id);
        }
        set
    }

    /// Builds a subset from the low `n` bits of `mask` (bit `i` is element `i`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64);
        Subset::from_ids(n, (0..n).filter(|i| mask >> i & 1 == 1))
    }

    pub fn universe_size(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.bits.contains(e)
    }

    pub fn insert(&mut self, e: ElementId) {
        self.bits.insert(e);
    }

    pub fn remove(&mut self, e: ElementId) {
        self.bits.set(e, false);
    }

    pub fn with(&self, e: ElementId) -> Subset {
        let mut out = self.clone();
        out.insert(e);
        out
    }

    pub fn without(&self, e: ElementId) -> Subset {
        let mut out = self.clone();
        out.remove(e);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.bits.ones()
    }

    pub fn ids(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Subset { bits }
    }

    /// Compares the membership bit strings `b_0 b_1 ... b_{n-1}` lexicographically.
    pub fn lex_cmp(&self, other: &Subset) -> std::cmp::Ordering {
        let n = self.universe_size().max(other.universe_size());
        for i in 0..n {
            match (self.contains(i), other.contains(i)) {
                (false, true) => return std::cmp::Ordering::Less,
                (true, false) => return std::cmp::Ordering::Greater,
                _ => {}
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A real-valued function on subsets of `0..universe_size()`.
///
/// Implementations must be deterministic. Values are dimensionless benefit
/// units, or cost units for cost oracles.
pub trait SetFunction: Send + Sync {
    fn universe_size(&self) -> usize;

    fn eval(&self, set: &Subset) -> f64;

    /// True when `eval(empty) == 0` holds structurally, so callers may skip
    /// probing the empty set.
    fn normalized_by_construction(&self) -> bool {
        false
    }
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn universe_size(&self) -> usize {
        (**self).universe_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        (**self).eval(set)
    }
    fn normalized_by_construction(&self) -> bool {
        (**self).normalized_by_construction()
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Arc<F> {
    fn universe_size(&self) -> usize {
        (**self).universe_size()
    }
    fn eval(&self, set: &Subset) -> f64 {
        (**self).eval(set)
    }
    fn normalized_by_construction(&self) -> bool {
        (**self).normalized_by_construction()
    }
}

/// `f(S ∪ {e}) − f(S)`.
pub fn marginal_gain<F: SetFunction + ?Sized>(f: &F, e: ElementId, set: &Subset) -> Result<f64> {
    if set.contains(e) {
        return Err(Error::ElementInSet { element: e });
    }
    Ok(f.eval(&set.with(e)) - f.eval(set))
}

/// Subset-keyed cache in front of a set function.
///
/// `distinct_evaluations` counts the underlying evaluations, i.e. cache misses.
/// Concurrent misses on the same subset may both evaluate; the values agree.
pub struct Memo<F> {
    inner: F,
    cache: Mutex<HashMap<Subset, f64>>,
}

impl<F: SetFunction> Memo<F> {
    pub fn new(inner: F) -> Self {
        Memo {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn distinct_evaluations(&self) -> usize {
        self.cache.lock().expect("memo poisoned").len()
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: SetFunction> SetFunction for Memo<F> {
    fn universe_size(&self) -> usize {
        self.inner.universe_size()
    }

    fn eval(&self, set: &Subset) -> f64 {
        if let Some(v) = self.cache.lock().expect("memo poisoned").get(set) {
            return *v;
        }
        let value = self.inner.eval(set);
        self.cache.lock().expect("memo poisoned").insert(set.clone(), value);
        value
    }

    fn normalized_by_construction(&self) -> bool {
        self.inner.normalized_by_construction()
    }
}

/// Wraps a closure as a set function and counts raw invocations.
pub struct FnOracle<G> {
    n: usize,
    func: G,
    normalized: bool,
    calls: AtomicUsize,
}

impl<G> FnOracle<G>
where
    G: Fn(&Subset) -> f64 + Send + Sync,
{
    pub fn new(n: usize, func: G) -> Self {
        FnOracle {
            n,
            func,
            normalized: false,
            calls: AtomicUsize::new(0),
        }
    }

    /// Declares that `func(empty) == 0` holds structurally.
    pub fn normalized(mut self) -> Self {
        self.normalized = true;
        self
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<G> SetFunction for FnOracle<G>
where
    G: Fn(&Subset) -> f64 + Send + Sync,
{
    fn universe_size(&self) -> usize {
        self.n
    }

    fn eval(&self, set: &Subset) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.func)(set)
    }

    fn normalized_by_construction(&self) -> bool {
        self.normalized
    }
}

/// `c(S) = Σ_{e ∈ S} w_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Additive {
    pub weights: Vec<f64>,
}

impl Additive {
    pub fn new(weights: Vec<f64>) -> Self {
        Additive { weights }
    }
}

impl SetFunction for Additive {
    fn universe_size(&self) -> usize {
        self.weights.len()
    }

    fn eval(&self, set: &Subset) -> f64 {
        set.iter().map(|e| self.weights[e]).sum()
    }

    fn normalized_by_construction(&self) -> bool {
        true
    }
}

/// Weighted coverage: element `e` covers `covers[e]`; value is the total
/// weight of covered items. Monotone and submodular.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCoverage {
    pub item_weights: Vec<f64>,
    pub covers: Vec<Vec<usize>>,
}

impl WeightedCoverage {
    pub fn new(item_weights: Vec<f64>, covers: Vec<Vec<usize>>) -> Self {
        WeightedCoverage { item_weights, covers }
    }

    /// Unit weights: the plain `|∪ covers[e]|` coverage function.
    pub fn unweighted(items: usize, covers: Vec<Vec<usize>>) -> Self {
        WeightedCoverage::new(vec![1.0; items], covers)
    }
}

impl SetFunction for WeightedCoverage {
    fn universe_size(&self) -> usize {
        self.covers.len()
    }

    fn eval(&self, set: &Subset) -> f64 {
        let mut covered = FixedBitSet::with_capacity(self.item_weights.len());
        for e in set.iter() {
            for &item in &self.covers[e] {
                covered.insert(item);
            }
        }
        covered.ones().map(|item| self.item_weights[item]).sum()
    }

    fn normalized_by_construction(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_pair() -> FnOracle<impl Fn(&Subset) -> f64 + Send + Sync> {
        FnOracle::new(2, |s: &Subset| match (s.contains(0), s.contains(1)) {
            (false, false) => 0.0,
            (true, false) => 3.0,
            (false, true) => -1.0,
            (true, true) => 1.0,
        })
    }

    #[test]
    fn marginal_gain_of_additive_is_the_weight() {
        let f = Additive::new(vec![5.0, 2.0, 7.0]);
        for s in [Subset::empty(3), Subset::from_ids(3, [1]), Subset::from_ids(3, [1, 2])] {
            assert_eq!(marginal_gain(&f, 0, &s).unwrap(), 5.0);
        }
    }

    #[test]
    fn marginal_gain_on_worked_pair() {
        let f = worked_pair();
        assert_eq!(marginal_gain(&f, 0, &Subset::empty(2)).unwrap(), 3.0);
        assert_eq!(f.calls(), 2);
        assert_eq!(
            marginal_gain(&f, 1, &Subset::empty(2)).unwrap(),
            f.eval(&Subset::from_ids(2, [1]))
        );
    }

    #[test]
    fn marginal_gain_rejects_member() {
        let f = worked_pair();
        let err = marginal_gain(&f, 0, &Subset::from_ids(2, [0])).unwrap_err();
        assert_eq!(err, Error::ElementInSet { element: 0 });
    }

    #[test]
    fn memo_counts_distinct_subsets() {
        let f = Memo::new(worked_pair());
        let a = Subset::from_ids(2, [0]);
        f.eval(&a);
        f.eval(&a);
        f.eval(&Subset::empty(2));
        assert_eq!(f.distinct_evaluations(), 2);
        assert_eq!(f.inner().calls(), 2);
    }

    #[test]
    fn lex_order_reads_bits_from_element_zero() {
        let n = 2;
        let mut all: Vec<Subset> = (0..4).map(|m| Subset::from_mask(n, m)).collect();
        all.sort_by(|a, b| a.lex_cmp(b));
        let ids: Vec<Vec<usize>> = all.iter().map(Subset::ids).collect();
        assert_eq!(ids, vec![vec![], vec![1], vec![0], vec![0, 1]]);
    }

    #[test]
    fn coverage_counts_items_once() {
        let f = WeightedCoverage::unweighted(4, vec![vec![0, 1], vec![1, 2], vec![3]]);
        assert_eq!(f.eval(&Subset::from_ids(3, [0, 1])), 3.0);
        assert_eq!(f.eval(&Subset::full(3)), 4.0);
        assert_eq!(f.eval(&Subset::empty(3)), 0.0);
    }
}
