use serde::Serialize;

use crate::error::{Error, Result};

/// Guaranteed fraction of the optimum reached by the ratio-greedy solver,
/// given the optimum's value `f_theta` and its additive cost `c_theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub f_theta: f64,
    pub c_theta: f64,
    pub factor: f64,
}

impl Bound {
    /// `γ = f(Θ) / c(Θ)`; infinite when the optimum is free.
    pub fn gamma(&self) -> f64 {
        if self.c_theta == 0.0 {
            f64::INFINITY
        } else {
            self.f_theta / self.c_theta
        }
    }

    /// The same factor written as `1 − ln(1 + γ) / γ`.
    pub fn factor_from_gamma(gamma: f64) -> f64 {
        if gamma.is_infinite() {
            1.0
        } else {
            1.0 - gamma.ln_1p() / gamma
        }
    }
}

/// `1 − (c/f)·ln(1 + f/c)`, or 1 when `c = 0`.
pub fn approx_bound(f_theta: f64, c_theta: f64) -> Result<Bound> {
    if f_theta <= 0.0 || !f_theta.is_finite() {
        return Err(Error::Domain(format!(
            "the guarantee needs a positive optimum, got f(Θ) = {f_theta}"
        )));
    }
    if c_theta < 0.0 || !c_theta.is_finite() {
        return Err(Error::Domain(format!(
            "the guarantee needs a non-negative optimum cost, got c(Θ) = {c_theta}"
        )));
    }
    let factor = if c_theta == 0.0 {
        1.0
    } else {
        1.0 - (c_theta / f_theta) * (f_theta / c_theta).ln_1p()
    };
    Ok(Bound {
        f_theta,
        c_theta,
        factor,
    })
}
