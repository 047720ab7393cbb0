use super::{IterationRecord, Phase, SolverResult};
use crate::setfn::{ElementId, Memo, SetFunction, Subset};

/// Cost-minimizing greedy: repeatedly add the candidate `x` minimizing
/// `bc(X ∪ {x})`, as long as that strictly lowers `bc(X)`.
///
/// `objective` holds `bc(chosen)` and the trace records cost values.
pub fn roy_greedy<F: SetFunction + ?Sized>(bc: &F, candidates: &Subset) -> SolverResult {
    let n = bc.universe_size();
    assert_eq!(
        candidates.universe_size(),
        n,
        "candidate set must live in the oracle's universe"
    );
    let bc = Memo::new(bc);
    let mut chosen = Subset::empty(n);
    let mut current = bc.eval(&chosen);
    let mut pool: Vec<ElementId> = candidates.iter().collect();
    let mut trace = Vec::new();

    while !pool.is_empty() {
        let mut best: Option<(usize, f64)> = None;
        for (slot, &e) in pool.iter().enumerate() {
            let cost = bc.eval(&chosen.with(e));
            if best.is_none_or(|(_, low)| cost < low) {
                best = Some((slot, cost));
            }
        }
        let (slot, cost) = best.expect("pool is non-empty");
        if current > cost {
            let e = pool.remove(slot);
            chosen.insert(e);
            current = cost;
            trace.push(IterationRecord {
                element: e,
                ratio: None,
                f_value_after: cost,
                f_m_value_after: None,
                phase: Phase::MainLoop,
            });
        } else {
            break;
        }
    }

    SolverResult {
        chosen,
        objective: current,
        trace,
        oracle_calls: bc.distinct_evaluations(),
    }
}
