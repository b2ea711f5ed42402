//! Histograms with linear or geometric bins.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};

const MAX_BINS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BinningMode {
    /// Edges `min + j w`.
    Linear,
    /// Edges `min r^j`; positive data only.
    Geometric,
}

/// Bins are half-open `[e_j, e_{j+1})`; the last edge lies above the maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram<T> {
    pub bin_edges: Vec<T>,
    pub counts: Vec<u64>,
    pub binning_mode: BinningMode,
}

impl<T: Scalar> Histogram<T> {
    /// Arithmetic midpoints for linear bins, geometric midpoints otherwise.
    pub fn centers(&self) -> Vec<T> {
        self.bin_edges
            .windows(2)
            .map(|e| match self.binning_mode {
                BinningMode::Linear => (e[0] + e[1]) / lit(2.0),
                BinningMode::Geometric => (e[0] * e[1]).sqrt(),
            })
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn non_empty_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// `param` is the bin width in linear mode and the edge ratio in geometric mode.
pub fn build_histogram<T: Scalar>(x: &[T], mode: BinningMode, param: T) -> Result<Histogram<T>> {
    if x.is_empty() {
        return Err(Error::BadBinSpec("no data".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::BadBinSpec("non-finite data value".into()));
    }
    if !param.is_finite() || param <= lit(1e-12) {
        return Err(Error::BadBinSpec(format!("bin width/ratio must exceed 1e-12, got {param}")));
    }
    let min = x.iter().copied().fold(T::infinity(), T::min);
    let max = x.iter().copied().fold(T::neg_infinity(), T::max);

    type Map<'a, A, B> = Box<dyn Fn(A) -> B + 'a>;
    let (edge, raw_index): (Map<usize, T>, Map<T, T>) = match mode {
        BinningMode::Linear => (
            Box::new(move |j| min + from_usize::<T>(j) * param),
            Box::new(move |v| ((v - min) / param).floor()),
        ),
        BinningMode::Geometric => {
            if param <= T::one() {
                return Err(Error::BadBinSpec(format!("geometric ratio must exceed 1, got {param}")));
            }
            if min <= T::zero() {
                return Err(Error::BadBinSpec("geometric bins need positive data".into()));
            }
            let ln_r = param.ln();
            (
                Box::new(move |j| min * param.powi(j as i32)),
                Box::new(move |v| ((v / min).ln() / ln_r).floor()),
            )
        }
    };

    let approx_bins = raw_index(max).to_usize().unwrap_or(usize::MAX).saturating_add(1);
    if approx_bins > MAX_BINS {
        return Err(Error::BadBinSpec(format!("more than {MAX_BINS} bins requested")));
    }
    let mut edges: Vec<T> = (0..=approx_bins).map(&edge).collect();
    while *edges.last().unwrap() <= max {
        edges.push(edge(edges.len()));
    }
    let bins = edges.len() - 1;

    let mut counts = vec![0u64; bins];
    for &v in x {
        let mut j = raw_index(v).to_usize().unwrap_or(0).min(bins - 1);
        while j > 0 && v < edges[j] {
            j -= 1;
        }
        while j + 1 < bins && v >= edges[j + 1] {
            j += 1;
        }
        counts[j] += 1;
    }
    Ok(Histogram {
        bin_edges: edges,
        counts,
        binning_mode: mode,
    })
}
