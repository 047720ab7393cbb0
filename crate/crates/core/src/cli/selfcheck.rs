use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Failure, SelfcheckArgs};
use crate::error::Result;
use crate::instances::{gen_random_submodular, RandomParams};
use crate::optimize::{run as run_algorithm, Algorithm, RunOptions};
use crate::setfn::{
    canonical_decomposition, improve_decomposition, is_monotone, is_submodular, SetFunction, Subset, TOLERANCE,
};
use crate::solvers::{lazy_marginal_greedy, marginal_greedy, universe_reduce, GreedyOptions};
use crate::workload::Workload;

const SUITE_INSTANCES: u64 = 20;

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, result: Result<(bool, String)>) -> Check {
    match result {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(err) => Check {
            name,
            passed: false,
            detail: err.to_string(),
        },
    }
}

fn workload_totals(workload: &Workload, bundled: bool) -> Result<(bool, String)> {
    let marginal = run_algorithm(&workload.prepare()?, Algorithm::Marginal, RunOptions::default())?;
    let roy = run_algorithm(&workload.prepare()?, Algorithm::Roy, RunOptions::default())?;
    let mut ok = [&marginal, &roy]
        .iter()
        .all(|o| o.bc_chosen <= o.bc_empty && (o.use_cost + o.materialization_cost - o.bc_chosen).abs() <= TOLERANCE);
    if bundled {
        ok &= marginal.bc_empty == 460.0
            && marginal.bc_chosen == 370.0
            && marginal.labels == ["B⋈C"]
            && roy.labels == ["B⋈C"];
    }
    let detail = format!(
        "bc(empty)={:.6} marginal bc(X)={:.6} {{{}}} roy bc(X)={:.6} {{{}}}",
        marginal.bc_empty,
        marginal.bc_chosen,
        marginal.labels.join(", "),
        roy.bc_chosen,
        roy.labels.join(", ")
    );
    Ok((ok, detail))
}

fn decomposition_identity(seed: u64) -> Result<(bool, String)> {
    let mut failures = 0;
    for i in 0..SUITE_INSTANCES {
        let f = Arc::new(gen_random_submodular(8, seed.wrapping_add(i), RandomParams::default())?);
        let d = canonical_decomposition(f.clone())?;
        let n = f.universe_size();
        let identity = (0..1u64 << n).all(|m| {
            let s = Subset::from_mask(n, m);
            (d.value(&s) - f.eval(&s)).abs() <= TOLERANCE
        });
        let improved = improve_decomposition(&d);
        let fixed = improved
            .cost()
            .iter()
            .zip(d.cost())
            .all(|(a, b)| (a - b).abs() <= TOLERANCE);
        if !(identity && fixed && is_monotone(d.f_m())? && is_submodular(d.f_m())?) {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("{failures} of {SUITE_INSTANCES} instances failed"),
    ))
}

fn lazy_matches_eager(seed: u64) -> Result<(bool, String)> {
    let mut failures = 0;
    for i in 0..SUITE_INSTANCES {
        let d = gen_random_submodular(40, seed.wrapping_add(i), RandomParams::default())?;
        let all = Subset::full(40);
        let eager = marginal_greedy(&d, &all, GreedyOptions::default());
        let lazy = lazy_marginal_greedy(&d, &all, GreedyOptions::default());
        if eager.chosen != lazy.chosen || eager.accepted() != lazy.accepted() || lazy.oracle_calls > eager.oracle_calls
        {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("{failures} of {SUITE_INSTANCES} instances differ"),
    ))
}

fn reduction_preserves_greedy(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for i in 0..SUITE_INSTANCES {
        let n = 30;
        let d = gen_random_submodular(n, seed.wrapping_add(i), RandomParams::default())?;
        let k = rng.gen_range(1..n);
        let all = Subset::full(n);
        let reduced = universe_reduce(&d, &all, k)?;
        let opts = GreedyOptions::with_k(k);
        if marginal_greedy(&d, &reduced, opts).chosen != marginal_greedy(&d, &all, opts).chosen {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("{failures} of {SUITE_INSTANCES} instances differ"),
    ))
}

pub(super) fn run(args: &SelfcheckArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    // An unreadable or invalid workload is an input error, not a failed check.
    let (workload, bundled) = match &args.workload {
        Some(path) => (Workload::from_path(path)?, false),
        None => (Workload::example_one(), true),
    };
    let checks = [
        check("workload", workload_totals(&workload, bundled)),
        check("decomposition", decomposition_identity(args.seed)),
        check("lazy-eager", lazy_matches_eager(args.seed)),
        check("reduction", reduction_preserves_greedy(args.seed)),
    ];
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!(
            "{} {:<14} {}\n",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    stdout.write_all(text.as_bytes()).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!("{failed} self-check(s) failed"),
        })
    }
}
