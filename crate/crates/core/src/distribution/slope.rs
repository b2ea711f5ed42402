//! Power-law exponent of total citations against h-index, `x ~ h^slope`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{from_u64, from_usize, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit<T> {
    pub slope: T,
    /// Intercept of `ln x` at `ln h = 0`, i.e. the log prefactor.
    pub intercept: T,
    pub points_used: usize,
    /// Pairs with `h = 0` or `x = 0`.
    pub dropped: usize,
}

/// Ordinary least squares of `ln x` on `ln h` over `(h, x)` pairs.
pub fn power_law_slope<T: Scalar>(pairs: &[(u64, u64)]) -> Result<PowerLawFit<T>> {
    let logs: Vec<(T, T)> = pairs
        .iter()
        .filter(|&&(h, x)| h >= 1 && x >= 1)
        .map(|&(h, x)| (from_u64::<T>(h).ln(), from_u64::<T>(x).ln()))
        .collect();
    if logs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} usable (h, x) pairs, at least 2 required",
            logs.len()
        )));
    }
    let n = from_usize::<T>(logs.len());
    let mean_h = logs.iter().map(|p| p.0).sum::<T>() / n;
    let mean_x = logs.iter().map(|p| p.1).sum::<T>() / n;
    let sxx: T = logs.iter().map(|p| (p.0 - mean_h) * (p.0 - mean_h)).sum();
    let sxy: T = logs.iter().map(|p| (p.0 - mean_h) * (p.1 - mean_x)).sum();
    if sxx == T::zero() {
        return Err(Error::InsufficientData(
            "all usable pairs share one h value; slope undefined".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok(PowerLawFit {
        slope,
        intercept: mean_x - slope * mean_h,
        points_used: logs.len(),
        dropped: pairs.len() - logs.len(),
    })
}
