//! The Giddings chromatography peak as a histogram model.
//!
//! ```text
//! H(h) = H0 + (A/w) sqrt(h_c/h) I_1(2 sqrt(h_c h) / w) exp(-(h + h_c)/w)
//! ```
//!
//! `H` is linear in `H0` and `A`, so the fit searches only over
//! `(ln w, ln h_c)` with Nelder–Mead and solves the two linear parameters in
//! closed form at every step.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::histogram::Histogram;
use super::simplex::{nelder_mead, SimplexOptions};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};
use crate::special::bessel_i1_scaled;
use crate::stream::SeedStream;

/// Four parameters plus two degrees of freedom.
pub const MIN_GIDDINGS_BINS: usize = 6;
pub const GIDDINGS_RESTARTS: usize = 8;
const JITTER_SEED: u64 = 0x6769_6464_696e_6773;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GiddingsParams<T> {
    /// `H0`
    pub baseline: T,
    /// `A`
    pub amplitude: T,
    /// `w`
    pub width: T,
    /// `h_c`
    pub center: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GiddingsFit<T> {
    pub params: GiddingsParams<T>,
    pub residual_ss: T,
    pub converged: bool,
    /// Index of the multi-start that produced `params`.
    pub restart: usize,
}

/// The peak term without `H0` and with `A = 1`.
///
/// `I_1(z) e^{-(h+h_c)/w}` is evaluated as `e^{-z} I_1(z) e^{-(sqrt h - sqrt h_c)^2 / w}`,
/// which stays finite where `I_1(z)` alone would overflow.
fn shape<T: Scalar>(h: T, width: T, center: T) -> Result<T> {
    let two = lit::<T>(2.0);
    let z = two * (center * h).sqrt() / width;
    let gap = h.sqrt() - center.sqrt();
    let i1s = bessel_i1_scaled(z)?;
    Ok((center / h).sqrt() / width * i1s * (-(gap * gap) / width).exp())
}

fn check_params<T: Scalar>(p: &GiddingsParams<T>) -> Result<()> {
    if !(p.width > T::zero()) || !p.width.is_finite() {
        return Err(Error::Domain(format!("width must be positive, got {}", p.width)));
    }
    if !(p.center > T::zero()) || !p.center.is_finite() {
        return Err(Error::Domain(format!("center must be positive, got {}", p.center)));
    }
    Ok(())
}

/// `H(h)` for `h > 0`.
pub fn giddings_eval<T: Scalar>(h: T, params: &GiddingsParams<T>) -> Result<T> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::Domain(format!("giddings_eval requires h > 0, got {h}")));
    }
    check_params(params)?;
    Ok(params.baseline + params.amplitude * shape(h, params.width, params.center)?)
}

/// Best `(H0, A)` for fixed shape values `g`, with `A >= 0`; returns `(H0, A, rss)`.
fn project<T: Scalar>(g: &[T], y: &[T]) -> (T, T, T) {
    let n = from_usize::<T>(y.len());
    let gm = g.iter().copied().sum::<T>() / n;
    let ym = y.iter().copied().sum::<T>() / n;
    let (mut sgg, mut sgy) = (T::zero(), T::zero());
    for (&gi, &yi) in g.iter().zip(y) {
        sgg = sgg + (gi - gm) * (gi - gm);
        sgy = sgy + (gi - gm) * (yi - ym);
    }
    let a = if sgg > T::zero() { (sgy / sgg).max(T::zero()) } else { T::zero() };
    let h0 = ym - a * gm;
    let rss = g
        .iter()
        .zip(y)
        .map(|(&gi, &yi)| {
            let r = yi - h0 - a * gi;
            r * r
        })
        .sum();
    (h0, a, rss)
}

fn profile_rss<T: Scalar>(h: &[T], y: &[T], ln_w: T, ln_c: T) -> Option<(T, T, T)> {
    let (w, c) = (ln_w.exp(), ln_c.exp());
    if !(w > T::zero() && w.is_finite() && c > T::zero() && c.is_finite()) {
        return None;
    }
    let g = h
        .iter()
        .map(|&hi| shape(hi, w, c))
        .collect::<Result<Vec<T>>>()
        .ok()?;
    if g.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(project(&g, y))
}

/// Mode location and half of the full width at half maximum, from the raw points.
fn initial_guess<T: Scalar>(h: &[T], y: &[T]) -> (T, T) {
    let base = y.iter().copied().fold(T::infinity(), T::min);
    let (mode, peak) = h
        .iter()
        .zip(y)
        .fold((h[0], y[0]), |best, (&hi, &yi)| if yi > best.1 { (hi, yi) } else { best });
    let half = base + (peak - base) / lit(2.0);
    let above: Vec<T> = h.iter().zip(y).filter(|(_, &yi)| yi >= half).map(|(&hi, _)| hi).collect();
    let lo = above.iter().copied().fold(T::infinity(), T::min);
    let hi = above.iter().copied().fold(T::neg_infinity(), T::max);
    let mut fwhm = hi - lo;
    if !(fwhm > T::zero()) {
        // single bin above half height; fall back to the point spacing
        let span = h.iter().copied().fold(T::neg_infinity(), T::max)
            - h.iter().copied().fold(T::infinity(), T::min);
        fwhm = span / from_usize(h.len());
    }
    (mode, fwhm / lit(2.0))
}

/// Least-squares fit of `H` to `(h, y)` points; every `h` must be positive.
pub fn fit_giddings_points<T: Scalar>(h: &[T], y: &[T]) -> Result<GiddingsFit<T>> {
    if h.len() != y.len() {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: format!("{} abscissae but {} values", h.len(), y.len()),
        });
    }
    if h.len() < MIN_GIDDINGS_BINS {
        return Err(Error::InsufficientData(format!(
            "{} points, at least {MIN_GIDDINGS_BINS} required",
            h.len()
        )));
    }
    if let Some(bad) = h.iter().find(|v| !(**v > T::zero()) || !v.is_finite()) {
        return Err(Error::Domain(format!("fit abscissae must be positive, got {bad}")));
    }
    if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite fit value {bad}")));
    }

    let (mode, half_width) = initial_guess(h, y);
    let mut rng = SeedStream::new(JITTER_SEED).rng();
    let starts: Vec<(T, T)> = (0..GIDDINGS_RESTARTS)
        .map(|i| {
            if i == 0 {
                (half_width, mode)
            } else {
                let jw: f64 = rng.random_range(0.5..1.5);
                let jc: f64 = rng.random_range(0.5..1.5);
                (half_width * lit(jw), mode * lit(jc))
            }
        })
        .collect();

    let opts = SimplexOptions::<T>::default();
    let runs: Vec<_> = starts
        .par_iter()
        .map(|&(w0, c0)| {
            let objective = |p: &[T]| profile_rss(h, y, p[0], p[1]).map_or(T::infinity(), |r| r.2);
            nelder_mead(objective, &[w0.ln(), c0.ln()], &opts)
        })
        .collect();

    let best = runs
        .iter()
        .enumerate()
        .filter(|(_, r)| r.converged && r.value.is_finite())
        .fold(None, |best: Option<(usize, T)>, (i, r)| match best {
            Some((_, v)) if v <= r.value => best,
            _ => Some((i, r.value)),
        });
    let Some((restart, _)) = best else {
        return Err(Error::FitDiverged(format!(
            "none of {GIDDINGS_RESTARTS} restarts reached the simplex tolerance"
        )));
    };
    let x = &runs[restart].x;
    let (baseline, amplitude, residual_ss) = profile_rss(h, y, x[0], x[1])
        .ok_or_else(|| Error::FitDiverged("non-finite model at the optimum".into()))?;
    Ok(GiddingsFit {
        params: GiddingsParams {
            baseline,
            amplitude,
            width: x[0].exp(),
            center: x[1].exp(),
        },
        residual_ss,
        converged: true,
        restart,
    })
}

/// Fits `H` to the counts at the bin centers. Needs at least
/// [`MIN_GIDDINGS_BINS`] non-empty bins and positive centers.
pub fn fit_giddings<T: Scalar>(hist: &Histogram<T>) -> Result<GiddingsFit<T>> {
    let non_empty = hist.non_empty_bins();
    if non_empty < MIN_GIDDINGS_BINS {
        return Err(Error::InsufficientData(format!(
            "{non_empty} non-empty bins, at least {MIN_GIDDINGS_BINS} required"
        )));
    }
    let counts: Vec<T> = hist.counts.iter().map(|&c| T::from_u64(c).unwrap()).collect();
    fit_giddings_points(&hist.centers(), &counts)
}
