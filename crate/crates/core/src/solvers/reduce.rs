use crate::error::{Error, Result};
use crate::setfn::{Decomposition, ElementId, SetFunction, Subset, TOLERANCE};

/// Shrinks `candidates` ahead of a `k`-capped greedy run without changing its output.
///
/// Positive-cost candidates are ranked by `f_M'(e, U ∖ {e}) / c(e)`; those whose
/// singleton ratio `f_M'(e, ∅) / c(e)` falls below the `k`-th ranked value can
/// never be picked and are dropped. Candidates with cost `≤ 0` bypass the ratio
/// test and are always kept. `k = |U|` returns `U` without evaluating anything.
pub fn universe_reduce(d: &Decomposition, candidates: &Subset, k: usize) -> Result<Subset> {
    let size = candidates.len();
    if k < 1 || k > size {
        return Err(Error::InvalidArgument(format!(
            "cardinality cap {k} outside 1..={size}"
        )));
    }
    if k == size {
        return Ok(candidates.clone());
    }

    let f_m = d.f_m();
    let cost = d.cost();
    let positive: Vec<ElementId> = candidates.iter().filter(|&e| cost[e] > 0.0).collect();
    if positive.len() < k {
        return Ok(candidates.clone());
    }

    let top = f_m.eval(candidates);
    let mut ranked: Vec<(ElementId, f64)> = positive
        .iter()
        .map(|&e| (e, (top - f_m.eval(&candidates.without(e))) / cost[e]))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let threshold = ranked[k - 1].1;

    let n = d.universe_size();
    let empty = Subset::empty(n);
    let base = f_m.eval(&empty);
    let mut reduced = Subset::empty(n);
    for e in candidates.iter() {
        // Keeping a borderline element is always safe, so rounding errs toward retention.
        let keep = cost[e] <= 0.0 || (f_m.eval(&empty.with(e)) - base) / cost[e] >= threshold - TOLERANCE;
        if keep {
            reduced.insert(e);
        }
    }
    Ok(reduced)
}
