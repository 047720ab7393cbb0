use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::setfn::{Memo, SetFunction, Subset, TOLERANCE};

/// Largest ground set checked over every triple.
pub const EXHAUSTIVE_REPORT_LIMIT: usize = 16;

/// How often a benefit function shows diminishing returns,
/// `f'(x, X) ≤ f'(x, Y)` for `Y ⊆ X` and `x ∉ X`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupermodularityReport {
    pub universe_size: usize,
    pub exhaustive: bool,
    pub triples: u64,
    pub satisfied: u64,
    pub fraction: f64,
}

/// Measures the diminishing-benefit heuristic on `f`. Every triple is checked
/// for ground sets up to [`EXHAUSTIVE_REPORT_LIMIT`]; larger ones draw
/// `sample_budget` random triples from `seed`.
pub fn supermodularity_report<F: SetFunction + ?Sized>(
    f: &F,
    sample_budget: usize,
    seed: u64,
) -> SupermodularityReport {
    let n = f.universe_size();
    let (triples, satisfied, exhaustive) = if n <= EXHAUSTIVE_REPORT_LIMIT {
        let (t, s) = exhaustive_counts(f, n);
        (t, s, true)
    } else {
        let (t, s) = sampled_counts(f, n, sample_budget, seed);
        (t, s, false)
    };
    SupermodularityReport {
        universe_size: n,
        exhaustive,
        triples,
        satisfied,
        fraction: if triples == 0 {
            1.0
        } else {
            satisfied as f64 / triples as f64
        },
    }
}

fn exhaustive_counts<F: SetFunction + ?Sized>(f: &F, n: usize) -> (u64, u64) {
    let values: Vec<f64> = (0..1u64 << n).map(|m| f.eval(&Subset::from_mask(n, m))).collect();
    let (mut triples, mut satisfied) = (0u64, 0u64);
    for x in 0..n {
        let bit = 1u64 << x;
        let rest = ((1u64 << n) - 1) & !bit;
        let mut big = rest;
        loop {
            let gain_big = values[(big | bit) as usize] - values[big as usize];
            let mut small = big;
            loop {
                let gain_small = values[(small | bit) as usize] - values[small as usize];
                triples += 1;
                if gain_big <= gain_small + TOLERANCE {
                    satisfied += 1;
                }
                if small == 0 {
                    break;
                }
                small = (small - 1) & big;
            }
            if big == 0 {
                break;
            }
            big = (big - 1) & rest;
        }
    }
    (triples, satisfied)
}

fn sampled_counts<F: SetFunction + ?Sized>(f: &F, n: usize, budget: usize, seed: u64) -> (u64, u64) {
    let memo = Memo::new(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut satisfied = 0u64;
    for _ in 0..budget {
        let x = rng.gen_range(0..n);
        let mut big = Subset::empty(n);
        let mut small = Subset::empty(n);
        for e in (0..n).filter(|&e| e != x) {
            if rng.gen_bool(0.5) {
                big.insert(e);
                if rng.gen_bool(0.5) {
                    small.insert(e);
                }
            }
        }
        let gain = |s: &Subset| memo.eval(&s.with(x)) - memo.eval(s);
        if gain(&big) <= gain(&small) + TOLERANCE {
            satisfied += 1;
        }
    }
    (budget as u64, satisfied)
}
