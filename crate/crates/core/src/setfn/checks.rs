//! Exhaustive property checks for small ground sets.

use super::{SetFunction, Subset, TOLERANCE};
use crate::error::{Error, Result};

/// Largest universe the exhaustive checkers accept. `is_submodular` visits
/// `O(n·3^n)` triples.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 14;

/// Values of `f` on every subset, indexed by bitmask (bit `i` is element `i`).
pub fn enumerate_values<F: SetFunction + ?Sized>(f: &F, limit: usize) -> Result<Vec<f64>> {
    let n = f.universe_size();
    if n > limit {
        return Err(Error::TooLarge {
            what: "exhaustive enumeration",
            size: n,
            limit,
        });
    }
    Ok((0..1u64 << n).map(|mask| f.eval(&Subset::from_mask(n, mask))).collect())
}

/// Checks `f'(u, A) ≥ f'(u, B)` for all `A ⊆ B ⊆ U`, `u ∉ B`, up to [`TOLERANCE`].
pub fn is_submodular<F: SetFunction + ?Sized>(f: &F) -> Result<bool> {
    let n = f.universe_size();
    let values = enumerate_values(f, EXHAUSTIVE_CHECK_LIMIT)?;
    let full = (1u64 << n) - 1;
    for big in 0..=full {
        let outside = full & !big;
        let mut small = big;
        loop {
            for u in 0..n {
                if outside >> u & 1 == 1 {
                    let bit = 1u64 << u;
                    let gain_small = values[(small | bit) as usize] - values[small as usize];
                    let gain_big = values[(big | bit) as usize] - values[big as usize];
                    if gain_small < gain_big - TOLERANCE {
                        return Ok(false);
                    }
                }
            }
            if small == 0 {
                break;
            }
            small = (small - 1) & big;
        }
    }
    Ok(true)
}

/// Checks `f(A) ≤ f(B)` for all `A ⊆ B ⊆ U`, up to [`TOLERANCE`].
pub fn is_monotone<F: SetFunction + ?Sized>(f: &F) -> Result<bool> {
    let n = f.universe_size();
    let values = enumerate_values(f, EXHAUSTIVE_CHECK_LIMIT)?;
    let full = (1u64 << n) - 1;
    for big in 0..=full {
        let mut small = big;
        loop {
            if values[small as usize] > values[big as usize] + TOLERANCE {
                return Ok(false);
            }
            if small == 0 {
                break;
            }
            small = (small - 1) & big;
        }
    }
    Ok(true)
}
