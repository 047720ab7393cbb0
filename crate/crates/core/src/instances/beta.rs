use crate::error::{Error, Result};

const GRID_POINTS: usize = 10_000;
const REFINE_TOLERANCE: f64 = 1e-8;

/// `g(β) = ((γ+1)(1 − e^{−β}) − β) / γ`.
pub fn beta_objective(gamma: f64, beta: f64) -> f64 {
    ((gamma + 1.0) * -(-beta).exp_m1() - beta) / gamma
}

/// Numerical argmax of [`beta_objective`] over `[0, γ+1]`: a uniform grid,
/// then golden-section search around the best grid point.
pub fn beta_optimum_check(gamma: f64) -> Result<f64> {
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma = {gamma} must be positive")));
    }
    let g = |b: f64| beta_objective(gamma, b);
    let hi = gamma + 1.0;
    let step = hi / GRID_POINTS as f64;
    let best = (0..=GRID_POINTS)
        .map(|i| i as f64 * step)
        .max_by(|a, b| g(*a).total_cmp(&g(*b)))
        .expect("grid is non-empty");

    let (mut a, mut b) = ((best - step).max(0.0), (best + step).min(hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    while b - a > REFINE_TOLERANCE {
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    Ok((a + b) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_argmax() {
        for gamma in [0.5, 1.0, std::f64::consts::E - 1.0, 4.0] {
            let beta = beta_optimum_check(gamma).unwrap();
            assert!((beta - gamma.ln_1p()).abs() < 1e-6, "γ = {gamma}: {beta}");
            let value = beta_objective(gamma, beta);
            assert!((value - (1.0 - gamma.ln_1p() / gamma)).abs() < 1e-9);
        }
        assert!((beta_optimum_check(std::f64::consts::E - 1.0).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_nonpositive_gamma() {
        assert!(beta_optimum_check(0.0).is_err());
        assert!(beta_optimum_check(f64::NAN).is_err());
    }
}
