use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setfn::{canonical_decomposition, Decomposition, SetFunction, Subset};
use crate::solvers::{approx_bound, Bound};

/// A family of subsets of `0..n_elements` with a budget `l` and a ratio `γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageInstance {
    pub n_elements: usize,
    pub sets: Vec<Vec<usize>>,
    pub l: usize,
    pub gamma: f64,
    /// Indices of a designated exact cover of size `l`, when one was planted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub planted: Vec<usize>,
}

impl CoverageInstance {
    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(Error::InvalidArgument("instance has no elements".into()));
        }
        if self.l == 0 || self.l > self.sets.len() {
            return Err(Error::InvalidArgument(format!(
                "budget l = {} outside 1..={}",
                self.l,
                self.sets.len()
            )));
        }
        if self.gamma <= 0.0 || !self.gamma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "gamma = {} must be positive",
                self.gamma
            )));
        }
        for (i, set) in self.sets.iter().enumerate() {
            if let Some(&x) = set.iter().find(|&&x| x >= self.n_elements) {
                return Err(Error::InvalidArgument(format!(
                    "sets[{i}] contains {x}, outside the ground set"
                )));
            }
        }
        if let Some(&p) = self.planted.iter().find(|&&p| p >= self.sets.len()) {
            return Err(Error::InvalidArgument(format!("planted set {p} does not exist")));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: CoverageInstance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances always serialize")
    }

    pub fn planted_subset(&self) -> Subset {
        Subset::from_ids(self.sets.len(), self.planted.iter().copied())
    }

    /// How many sets contain each element.
    pub fn multiplicity(&self) -> Vec<usize> {
        let mut count = vec![0; self.n_elements];
        for set in &self.sets {
            for &x in set {
                count[x] += 1;
            }
        }
        count
    }
}

/// `scale · |⋃ covers[S]| / n_items`, counting covered items exactly.
#[derive(Debug, Clone)]
pub struct ScaledCoverage {
    n_items: usize,
    scale: f64,
    covers: Vec<FixedBitSet>,
}

impl ScaledCoverage {
    pub fn new(n_items: usize, scale: f64, covers: &[Vec<usize>]) -> Self {
        let covers = covers
            .iter()
            .map(|c| {
                let mut bits = FixedBitSet::with_capacity(n_items);
                c.iter().for_each(|&x| bits.insert(x));
                bits
            })
            .collect();
        ScaledCoverage { n_items, scale, covers }
    }

    pub fn covered(&self, s: &Subset) -> usize {
        let mut union = FixedBitSet::with_capacity(self.n_items);
        for e in s.iter() {
            union.union_with(&self.covers[e]);
        }
        union.count_ones(..)
    }
}

impl SetFunction for ScaledCoverage {
    fn universe_size(&self) -> usize {
        self.covers.len()
    }

    fn eval(&self, s: &Subset) -> f64 {
        self.scale * (self.covered(s) as f64 / self.n_items as f64)
    }

    fn normalized_by_construction(&self) -> bool {
        true
    }
}

/// Profitted max coverage: `f(A) = ((γ+1)/γ)·|⋃A|/n − |A|/(γl)`.
///
/// Evaluated over one common denominator so a planted cover scores exactly 1.
#[derive(Debug, Clone)]
pub struct ProfittedCoverage {
    coverage: ScaledCoverage,
    n_items: usize,
    l: usize,
    gamma: f64,
}

impl ProfittedCoverage {
    /// The same function as `f_M − c` with `f_M = ((γ+1)/γ)·|⋃A|/n` and a
    /// uniform cost of `1/(γl)` per set.
    pub fn decomposition(&self) -> Decomposition {
        let f_m = ScaledCoverage {
            scale: (self.gamma + 1.0) / self.gamma,
            ..self.coverage.clone()
        };
        let cost = vec![1.0 / (self.gamma * self.l as f64); self.coverage.covers.len()];
        Decomposition::new(Arc::new(f_m), cost).expect("one cost per set")
    }
}

impl SetFunction for ProfittedCoverage {
    fn universe_size(&self) -> usize {
        self.coverage.covers.len()
    }

    fn eval(&self, s: &Subset) -> f64 {
        // (γ·lk + (lk − n|A|)) / (γ·ln) with the integer parts kept exact.
        let lk = (self.l * self.coverage.covered(s)) as i64;
        let excess = lk - (self.n_items * s.len()) as i64;
        let scale = self.gamma * (self.l * self.n_items) as f64;
        (self.gamma * lk as f64 + excess as f64) / scale
    }

    fn normalized_by_construction(&self) -> bool {
        true
    }
}

pub fn profitted_oracle(inst: &CoverageInstance) -> Result<ProfittedCoverage> {
    inst.validate()?;
    Ok(ProfittedCoverage {
        coverage: ScaledCoverage::new(inst.n_elements, 1.0, &inst.sets),
        n_items: inst.n_elements,
        l: inst.l,
        gamma: inst.gamma,
    })
}

/// `l` disjoint blocks partitioning `0..n`, then `extra_sets` random sets no
/// larger than a block, then copies of planted blocks until every element is
/// covered at least twice. The blocks come first and are the planted family.
pub fn gen_planted_cover(n: usize, l: usize, extra_sets: usize, gamma: f64, seed: u64) -> Result<CoverageInstance> {
    if l == 0 || n == 0 || !n.is_multiple_of(l) {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be a positive multiple of l = {l}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = n / l;
    let mut elements: Vec<usize> = (0..n).collect();
    elements.shuffle(&mut rng);
    let mut sets: Vec<Vec<usize>> = elements
        .chunks(block)
        .map(|c| {
            let mut c = c.to_vec();
            c.sort_unstable();
            c
        })
        .collect();
    for _ in 0..extra_sets {
        let size = rng.gen_range(1..=block);
        let mut set: Vec<usize> = rand::seq::index::sample(&mut rng, n, size).into_vec();
        set.sort_unstable();
        sets.push(set);
    }
    let mut inst = CoverageInstance {
        n_elements: n,
        sets,
        l,
        gamma,
        planted: (0..l).collect(),
    };
    let count = inst.multiplicity();
    let copies: Vec<Vec<usize>> = inst.sets[..l]
        .iter()
        .filter(|b| b.iter().any(|&x| count[x] < 2))
        .cloned()
        .collect();
    inst.sets.extend(copies);
    inst.validate()?;
    Ok(inst)
}

/// The ratio-greedy guarantee for the planted cover, measured against the
/// canonical cost of the profitted oracle.
pub fn planted_bound(inst: &CoverageInstance) -> Result<Bound> {
    if inst.planted.is_empty() {
        return Err(Error::InvalidArgument("instance has no planted cover".into()));
    }
    let f = Arc::new(profitted_oracle(inst)?);
    let canonical = canonical_decomposition(f.clone())?;
    let planted = inst.planted_subset();
    approx_bound(f.eval(&planted), canonical.cost_of(&planted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfn::is_submodular;
    use crate::solvers::exhaustive_max;

    #[test]
    fn planted_cover_shape() {
        let inst = gen_planted_cover(12, 3, 0, 1.0, 5).unwrap();
        assert_eq!(inst.sets.len(), 6);
        assert!(inst.sets[..3].iter().all(|s| s.len() == 4));
        assert!(inst.multiplicity().iter().all(|&c| c >= 2));
        assert_eq!(gen_planted_cover(12, 3, 0, 1.0, 5).unwrap(), inst);
        assert!(gen_planted_cover(10, 3, 0, 1.0, 5).is_err());
    }

    #[test]
    fn planted_family_has_value_one() {
        for gamma in [0.5, 1.0, 2.0, 4.0] {
            let inst = gen_planted_cover(12, 3, 2, gamma, 11).unwrap();
            let f = profitted_oracle(&inst).unwrap();
            let d = f.decomposition();
            let g = inst.planted_subset();
            assert_eq!(f.eval(&g), 1.0);
            assert!((d.value(&g) - 1.0).abs() < 1e-12);
            let ratio = d.f_m().eval(&g) / d.cost_of(&g) - 1.0;
            assert!((ratio - gamma).abs() < 1e-9);
            assert_eq!(d.value(&Subset::empty(inst.sets.len())), 0.0);
        }
    }

    #[test]
    fn half_cover_formula() {
        let inst = CoverageInstance {
            n_elements: 4,
            sets: vec![vec![0, 1], vec![2], vec![3]],
            l: 2,
            gamma: 1.0,
            planted: vec![],
        };
        let f = profitted_oracle(&inst).unwrap();
        assert_eq!(f.eval(&Subset::from_ids(3, [0])), 0.5);
        assert_eq!(f.decomposition().value(&Subset::from_ids(3, [0])), 0.5);
    }

    #[test]
    fn exhaustive_optimum_and_canonical_costs() {
        let inst = gen_planted_cover(12, 3, 0, 1.0, 2).unwrap();
        let f = Arc::new(profitted_oracle(&inst).unwrap());
        let best = exhaustive_max(&*f, &Subset::full(inst.sets.len())).unwrap();
        assert_eq!(best.objective, 1.0);
        assert!(is_submodular(&*f).unwrap());
        let canon = canonical_decomposition(f.clone()).unwrap();
        for (a, b) in canon.cost().iter().zip(f.decomposition().cost()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn planted_bound_matches_gamma_form() {
        for gamma in [0.5, 1.0, 3.0] {
            let inst = gen_planted_cover(12, 3, 1, gamma, 4).unwrap();
            let bound = planted_bound(&inst).unwrap();
            assert!((bound.factor - Bound::factor_from_gamma(gamma)).abs() < 1e-9);
        }
    }

    #[test]
    fn json_round_trip() {
        let inst = gen_planted_cover(6, 2, 3, 1.5, 9).unwrap();
        assert_eq!(CoverageInstance::from_json(&inst.to_json()).unwrap(), inst);
        assert!(CoverageInstance::from_json(r#"{"n_elements":2,"sets":[[5]],"l":1,"gamma":1}"#).is_err());
    }
}
