use std::cmp::Ordering;

use super::SolverResult;
use crate::error::{Error, Result};
use crate::setfn::{ElementId, SetFunction, Subset};

/// Largest candidate set [`exhaustive_max`] will enumerate.
pub const EXHAUSTIVE_MAX_LIMIT: usize = 22;

/// Brute-force argmax of `f` over all subsets of `candidates`.
///
/// Ties go to the lexicographically smallest membership bit string.
pub fn exhaustive_max<F: SetFunction + ?Sized>(f: &F, candidates: &Subset) -> Result<SolverResult> {
    let n = f.universe_size();
    let ids: Vec<ElementId> = candidates.iter().collect();
    if ids.len() > EXHAUSTIVE_MAX_LIMIT {
        return Err(Error::TooLarge {
            what: "exhaustive search",
            size: ids.len(),
            limit: EXHAUSTIVE_MAX_LIMIT,
        });
    }

    let mut best_set = Subset::empty(n);
    let mut best_value = f.eval(&best_set);
    let total = 1u64 << ids.len();
    for mask in 1..total {
        let set = Subset::from_ids(
            n,
            ids.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        );
        let value = f.eval(&set);
        if value > best_value || (value == best_value && set.lex_cmp(&best_set) == Ordering::Less) {
            best_value = value;
            best_set = set;
        }
    }

    Ok(SolverResult {
        chosen: best_set,
        objective: best_value,
        trace: Vec::new(),
        oracle_calls: total as usize,
    })
}
