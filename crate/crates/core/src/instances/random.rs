use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setfn::{Decomposition, WeightedCoverage};

/// Shape of a random coverage-minus-cost instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RandomParams {
    /// Items per ground-set element.
    pub items_per_element: f64,
    pub max_cover: usize,
    /// Item weights are integers in `1..=max_weight`.
    pub max_weight: u32,
    /// Each cost is the element's standalone value times a factor drawn from this range.
    pub cost_factor: (f64, f64),
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            items_per_element: 2.0,
            max_cover: 4,
            max_weight: 10,
            cost_factor: (0.2, 1.1),
        }
    }
}

/// Weighted coverage `f_M` minus a positive additive cost, seeded.
pub fn gen_random_submodular(n: usize, seed: u64, params: RandomParams) -> Result<Decomposition> {
    if n == 0 {
        return Err(Error::InvalidArgument("instance needs at least one element".into()));
    }
    let (lo, hi) = params.cost_factor;
    if params.max_cover == 0 || params.max_weight == 0 || !(lo > 0.0 && lo <= hi) {
        return Err(Error::InvalidArgument(format!(
            "unusable generator parameters {params:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = ((n as f64 * params.items_per_element).ceil() as usize).max(1);
    let weights: Vec<f64> = (0..items)
        .map(|_| rng.gen_range(1..=params.max_weight) as f64)
        .collect();
    let covers: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=params.max_cover.min(items));
            let mut c = rand::seq::index::sample(&mut rng, items, size).into_vec();
            c.sort_unstable();
            c
        })
        .collect();
    let cost: Vec<f64> = covers
        .iter()
        .map(|c| {
            let standalone: f64 = c.iter().map(|&i| weights[i]).sum();
            standalone * rng.gen_range(lo..=hi)
        })
        .collect();
    Decomposition::new(Arc::new(WeightedCoverage::new(weights, covers)), cost)
}
