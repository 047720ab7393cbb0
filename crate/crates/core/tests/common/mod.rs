//! Independent reference implementations used by the integration tests.

#![allow(dead_code)]

use mqo::costing::Costing;
use mqo::qdag::EqId;
use mqo::setfn::{SetFunction, Subset};

/// Every way of obtaining `e` as an explicit plan tree, by cost. Nodes of `s`
/// may be read, except `e` itself when `read_self` is false.
fn plan_trees(c: &Costing, s: &[EqId], e: EqId, read_self: bool) -> Vec<f64> {
    let dag = c.dag();
    let prices = c.prices();
    let mut costs = Vec::new();
    if read_self && s.contains(&e) {
        costs.push(prices.read[e].expect("read price"));
    }
    for &o in &dag.eq(e).child_ops {
        let op = dag.op(o);
        let mut partial = vec![prices.op[o]];
        for &input in &op.inputs {
            let options = plan_trees(c, s, input, true);
            partial = partial
                .iter()
                .flat_map(|p| options.iter().map(move |x| p + x))
                .collect();
        }
        costs.extend(partial);
    }
    costs
}

fn min(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `(use cost, materialization cost)` by enumerating every plan tree.
pub fn brute_force_bc(c: &Costing, s: &[EqId]) -> (f64, f64) {
    let root = c.dag().root();
    let use_cost = min(&plan_trees(c, s, root, false));
    let materialization = s
        .iter()
        .map(|&m| min(&plan_trees(c, s, m, false)) + c.prices().write[m].expect("write price"))
        .sum();
    (use_cost, materialization)
}

/// Maximum of `f` over all subsets of its ground set, smallest mask on ties.
pub fn brute_max<F: SetFunction + ?Sized>(f: &F) -> (Subset, f64) {
    let n = f.universe_size();
    let mut best = (Subset::empty(n), f.eval(&Subset::empty(n)));
    for mask in 1..1u64 << n {
        let s = Subset::from_mask(n, mask);
        let v = f.eval(&s);
        if v > best.1 {
            best = (s, v);
        }
    }
    best
}

pub fn all_values<F: SetFunction + ?Sized>(f: &F) -> Vec<f64> {
    let n = f.universe_size();
    (0..1u64 << n).map(|m| f.eval(&Subset::from_mask(n, m))).collect()
}

/// Pairwise form: `f(S+x) + f(S+y) ≥ f(S+x+y) + f(S)` for all `S` and `x, y ∉ S`.
pub fn submodular_by_pairs(values: &[f64], n: usize, tol: f64) -> bool {
    for s in 0..1usize << n {
        for x in (0..n).filter(|x| s >> x & 1 == 0) {
            for y in (x + 1..n).filter(|y| s >> y & 1 == 0) {
                let (sx, sy) = (s | 1 << x, s | 1 << y);
                if values[sx] + values[sy] < values[sx | sy] + values[s] - tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Single-element form: `f(S+x) ≥ f(S)`.
pub fn monotone_by_steps(values: &[f64], n: usize, tol: f64) -> bool {
    (0..1usize << n).all(|s| (0..n).all(|x| values[s | 1 << x] >= values[s] - tol))
}
