use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{ratio, IterationRecord, Phase, SolverResult};
use crate::setfn::{Decomposition, ElementId, Memo, SetFunction, Subset};

/// Knobs shared by the eager and lazy ratio-greedy solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GreedyOptions {
    /// Stop after this many elements. Heuristic: no approximation guarantee
    /// is known for the capped variant.
    pub k: Option<usize>,
    /// Drop candidates whose ratio fell to 1 or below; under a submodular
    /// `f_M` they can never recover.
    pub prune: bool,
}

impl GreedyOptions {
    pub fn with_k(k: usize) -> Self {
        GreedyOptions {
            k: Some(k),
            prune: false,
        }
    }
}

struct State<'a> {
    d: &'a Decomposition,
    f_m: Memo<&'a crate::setfn::MonotonePart>,
    chosen: Subset,
    f_m_chosen: f64,
    trace: Vec<IterationRecord>,
    cap: usize,
}

impl<'a> State<'a> {
    fn new(d: &'a Decomposition, candidates: &Subset, opts: GreedyOptions) -> Self {
        let n = d.universe_size();
        assert_eq!(
            candidates.universe_size(),
            n,
            "candidate set must live in the decomposition's universe"
        );
        let f_m = Memo::new(d.f_m());
        let chosen = Subset::empty(n);
        let f_m_chosen = f_m.eval(&chosen);
        State {
            d,
            f_m,
            chosen,
            f_m_chosen,
            trace: Vec::new(),
            cap: opts.k.unwrap_or(usize::MAX),
        }
    }

    fn full(&self) -> bool {
        self.chosen.len() >= self.cap
    }

    fn ratio_of(&self, e: ElementId) -> f64 {
        let gain = self.f_m.eval(&self.chosen.with(e)) - self.f_m_chosen;
        ratio(gain, self.d.cost()[e])
    }

    fn accept(&mut self, e: ElementId, r: Option<f64>, phase: Phase) {
        self.chosen.insert(e);
        self.f_m_chosen = self.f_m.eval(&self.chosen);
        let f_value = self.f_m_chosen - self.d.cost_of(&self.chosen);
        self.trace.push(IterationRecord {
            element: e,
            ratio: r,
            f_value_after: f_value,
            f_m_value_after: Some(self.f_m_chosen),
            phase,
        });
    }

    /// Appends every negative-cost candidate in ascending id order, up to the cap.
    fn sweep_negative(&mut self, candidates: &Subset) {
        for e in candidates.iter() {
            if self.full() {
                break;
            }
            if self.d.cost()[e] < 0.0 && !self.chosen.contains(e) {
                self.accept(e, None, Phase::NegativeCostSweep);
            }
        }
    }

    fn finish(self) -> SolverResult {
        let objective = self.f_m_chosen - self.d.cost_of(&self.chosen);
        SolverResult {
            chosen: self.chosen,
            objective,
            trace: self.trace,
            oracle_calls: self.f_m.distinct_evaluations(),
        }
    }
}

fn main_loop_candidates(d: &Decomposition, candidates: &Subset) -> Vec<ElementId> {
    candidates.iter().filter(|&e| d.cost()[e] >= 0.0).collect()
}

/// Ratio-greedy maximization of `f = f_M − c` over `candidates`.
///
/// While some candidate has `f_M'(x, X) / c(x) > 1`, the best one is added;
/// afterwards every candidate with negative cost is appended.
pub fn marginal_greedy(d: &Decomposition, candidates: &Subset, opts: GreedyOptions) -> SolverResult {
    let mut state = State::new(d, candidates, opts);
    let mut pool = main_loop_candidates(d, candidates);

    while !pool.is_empty() && !state.full() {
        let mut best: Option<(ElementId, f64)> = None;
        let mut kept = Vec::with_capacity(pool.len());
        for &e in &pool {
            let r = state.ratio_of(e);
            if best.is_none_or(|(_, top)| r > top) {
                best = Some((e, r));
            }
            if !(opts.prune && r <= 1.0) {
                kept.push(e);
            }
        }
        pool = kept;
        match best {
            Some((e, r)) if r > 1.0 => {
                pool.retain(|&x| x != e);
                state.accept(e, Some(r), Phase::MainLoop);
            }
            _ => break,
        }
    }

    state.sweep_negative(candidates);
    state.finish()
}

#[derive(Debug)]
struct Bound {
    key: f64,
    element: ElementId,
    /// Size of the chosen set when `key` was computed; `None` for the initial +∞.
    fresh_at: Option<usize>,
}

impl PartialEq for Bound {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Bound {}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    // Max-heap on the key; among equal keys the smaller id surfaces first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.element.cmp(&self.element))
    }
}

/// [`marginal_greedy`] with lazily refreshed ratio upper bounds.
///
/// Requires a submodular `f_M`, under which a stale ratio never underestimates
/// the current one; the output then matches the eager solver exactly.
pub fn lazy_marginal_greedy(d: &Decomposition, candidates: &Subset, opts: GreedyOptions) -> SolverResult {
    let mut state = State::new(d, candidates, opts);
    let mut heap: BinaryHeap<Bound> = main_loop_candidates(d, candidates)
        .into_iter()
        .map(|element| Bound {
            key: f64::INFINITY,
            element,
            fresh_at: None,
        })
        .collect();

    while !state.full() {
        let Some(top) = heap.pop() else { break };
        let round = state.chosen.len();
        if top.fresh_at == Some(round) {
            if top.key > 1.0 {
                state.accept(top.element, Some(top.key), Phase::MainLoop);
                continue;
            }
            break;
        }
        let r = state.ratio_of(top.element);
        if opts.prune && r <= 1.0 {
            continue;
        }
        heap.push(Bound {
            key: r,
            element: top.element,
            fresh_at: Some(round),
        });
    }

    state.sweep_negative(candidates);
    state.finish()
}
