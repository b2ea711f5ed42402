//! Moment-ratio estimation of the stretched-exponential shape `beta`.
//!
//! For citation counts distributed as `N(x) ∝ exp(-(x/x0)^beta)` the ratio
//! `M_k = <x^k> / <x>^k` is free of `x0`:
//!
//! ```text
//! M_k = Γ((k+1)/β) Γ(1/β)^(k-1) / Γ(2/β)^k
//! ```
//!
//! `fit_beta` scans a grid of `beta` values and keeps the one whose `M_k`
//! curve is closest to the empirical ratios `R_k` over a grid of `k`.
//! The scale `x0` is never estimated.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};
use crate::special::ln_gamma;

/// Smallest sample accepted by [`fit_beta`].
pub const MIN_FIT_SAMPLES: usize = 10;

/// `0.20, 0.22, ..., 0.34`.
pub fn default_beta_grid<T: Scalar>() -> Vec<T> {
    (0..8).map(|i| lit::<T>((20 + 2 * i) as f64) / lit(100.0)).collect()
}

/// `1.0, 1.1, ..., 3.0`.
pub fn default_k_grid<T: Scalar>() -> Vec<T> {
    (0..=20).map(|i| lit::<T>((10 + i) as f64) / lit(10.0)).collect()
}

/// How the distance between `M_k(beta)` and `R_k` is measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentObjective {
    /// `Σ_k (ln M_k - ln R_k)^2`
    #[default]
    Log,
    /// `Σ_k (M_k - R_k)^2`; dominated by the largest `k`.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchedExpFit<T> {
    pub beta: T,
    pub grid: Vec<T>,
    pub objective_per_beta: Vec<T>,
    pub k_grid: Vec<T>,
    /// Empirical `R_k` on `k_grid`.
    pub empirical: Vec<T>,
    pub objective: MomentObjective,
    pub points_used: usize,
    /// Non-positive values left out of the fit.
    pub excluded: usize,
}

/// `M_k(beta)` for `k >= 1`, `beta > 0`.
pub fn theoretical_moment_ratio<T: Scalar>(k: T, beta: T) -> Result<T> {
    if !(k >= T::one()) || !k.is_finite() {
        return Err(Error::Domain(format!("moment order k must be >= 1, got {k}")));
    }
    if !(beta > T::zero()) || !beta.is_finite() {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let inv = T::one() / beta;
    let ln_m = ln_gamma((k + T::one()) * inv) + (k - T::one()) * ln_gamma(inv)
        - k * ln_gamma(lit::<T>(2.0) * inv);
    Ok(ln_m.exp())
}

/// `R_k = <x^k> / <x>^k = n^(k-1) Σ x^k / (Σ x)^k` for positive data.
pub fn empirical_moment_ratio<T: Scalar>(k: T, x: &[T]) -> Result<T> {
    if !(k >= T::one()) || !k.is_finite() {
        return Err(Error::Domain(format!("moment order k must be >= 1, got {k}")));
    }
    if x.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    if let Some(bad) = x.iter().find(|v| !(**v > T::zero()) || !v.is_finite()) {
        return Err(Error::Domain(format!("moment ratios need positive data, got {bad}")));
    }
    Ok(ratio_unchecked(k, x))
}

/// Computed on `x / mean(x)` so large `k` does not overflow.
fn ratio_unchecked<T: Scalar>(k: T, x: &[T]) -> T {
    let n = from_usize::<T>(x.len());
    let mean = x.iter().copied().sum::<T>() / n;
    let scaled_first = x.iter().map(|&v| v / mean).sum::<T>() / n;
    let scaled_k = x.iter().map(|&v| (v / mean).powf(k)).sum::<T>() / n;
    scaled_k / scaled_first.powf(k)
}

/// Picks the grid `beta` whose `M_k` best matches the data's `R_k`.
///
/// Non-positive values are dropped and counted in `excluded`; at least
/// [`MIN_FIT_SAMPLES`] positive values must remain. Ties go to the smaller
/// grid index.
pub fn fit_beta<T: Scalar>(
    x: &[T],
    beta_grid: &[T],
    k_grid: &[T],
    objective: MomentObjective,
) -> Result<StretchedExpFit<T>> {
    if beta_grid.is_empty() || k_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "beta and k grids must be non-empty".into(),
        });
    }
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite sample value {bad}")));
    }
    let used: Vec<T> = x.iter().copied().filter(|&v| v > T::zero()).collect();
    if used.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{} positive values, at least {MIN_FIT_SAMPLES} required",
            used.len()
        )));
    }

    let empirical = k_grid
        .iter()
        .map(|&k| empirical_moment_ratio(k, &used))
        .collect::<Result<Vec<T>>>()?;

    let mut objective_per_beta = Vec::with_capacity(beta_grid.len());
    for &beta in beta_grid {
        let mut acc = T::zero();
        for (&k, &r) in k_grid.iter().zip(&empirical) {
            let m = theoretical_moment_ratio(k, beta)?;
            let d = match objective {
                MomentObjective::Log => m.ln() - r.ln(),
                MomentObjective::Raw => m - r,
            };
            acc = acc + d * d;
        }
        objective_per_beta.push(acc);
    }

    let best = objective_per_beta
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v < objective_per_beta[best] { i } else { best });

    Ok(StretchedExpFit {
        beta: beta_grid[best],
        grid: beta_grid.to_vec(),
        objective_per_beta,
        k_grid: k_grid.to_vec(),
        empirical,
        objective,
        points_used: used.len(),
        excluded: x.len() - used.len(),
    })
}
