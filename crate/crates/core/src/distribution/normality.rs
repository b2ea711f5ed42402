//! Shape statistics and the Shapiro–Wilk normality test.
//!
//! The W statistic and its p-value follow Royston's 1995 algorithm (AS R94):
//! coefficients from approximate expected normal order statistics with
//! polynomial corrections for the two outermost pairs, and a normalizing
//! transformation of `ln(1 - W)` for the significance level. Valid for
//! `3 <= n <= 5000`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};

pub const SW_MIN_N: usize = 3;
pub const SW_MAX_N: usize = 5000;
pub const SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityReport<T> {
    pub n: usize,
    pub w: T,
    pub p_value: T,
    pub kurtosis: T,
    pub skewness: T,
    /// `p_value > 0.05`.
    pub normal_at_5pct: bool,
}

/// Central moments `(m2, m3, m4)` with the `1/n` convention.
fn central_moments<T: Scalar>(x: &[T]) -> Result<(T, T, T)> {
    if x.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} values, at least 2 required",
            x.len()
        )));
    }
    let n = from_usize::<T>(x.len());
    let mean = x.iter().copied().sum::<T>() / n;
    let (mut m2, mut m3, mut m4) = (T::zero(), T::zero(), T::zero());
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 = m2 + d2;
        m3 = m3 + d2 * d;
        m4 = m4 + d2 * d2;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    // Relative to the data scale so constant non-zero samples are caught too.
    let scale = x.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    if m2 <= scale * scale * T::epsilon() * T::epsilon() {
        return Err(Error::ZeroVariance);
    }
    Ok((m2, m3, m4))
}

/// Excess kurtosis `m4 / m2^2 - 3`.
pub fn kurtosis<T: Scalar>(x: &[T]) -> Result<T> {
    let (m2, _, m4) = central_moments(x)?;
    Ok(m4 / (m2 * m2) - lit(3.0))
}

/// `m3 / m2^(3/2)`.
pub fn skewness<T: Scalar>(x: &[T]) -> Result<T> {
    let (m2, m3, _) = central_moments(x)?;
    Ok(m3 / (m2 * m2.sqrt()))
}

// Polynomial coefficients, lowest order first.
const C1: [f64; 6] = [0.0, 0.221_157, -0.147_981, -2.071_190, 4.434_685, -2.706_056];
const C2: [f64; 6] = [0.0, 0.042_981, -0.293_762, -1.752_461, 5.682_633, -3.582_633];
const C3: [f64; 4] = [0.5440, -0.399_78, 0.025_054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.778_57, 0.062_767, -0.002_032_2];
const C5: [f64; 4] = [-1.5861, -0.310_82, -0.083_751, 0.003_891_5];
const C6: [f64; 3] = [-0.4803, -0.082_676, 0.003_030_2];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Coefficients for the upper half of the ordered sample, largest first:
/// `a[0]` multiplies `x_(n) - x_(1)`, `a[1]` multiplies `x_(n-1) - x_(2)`, ...
fn sw_coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![FRAC_1_SQRT_2];
    }
    let std_normal = Normal::new(0.0, 1.0).expect("standard normal");
    let an25 = n as f64 + 0.25;
    // m[i] = expected value of the (n - i)-th order statistic, i < half (positive)
    let m: Vec<f64> = (0..half)
        .map(|i| -std_normal.inverse_cdf((i as f64 + 1.0 - 0.375) / an25))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let u = 1.0 / (n as f64).sqrt();

    let mut a = vec![0.0; half];
    a[0] = m[0] / ssumm2 + poly(&C1, u);
    let (fixed, fac) = if n > 5 {
        a[1] = m[1] / ssumm2 + poly(&C2, u);
        let num = summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1];
        let den = 1.0 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1];
        (2, (num / den).sqrt())
    } else {
        let num = summ2 - 2.0 * m[0] * m[0];
        let den = 1.0 - 2.0 * a[0] * a[0];
        (1, (num / den).sqrt())
    };
    for i in fixed..half {
        a[i] = m[i] / fac;
    }
    a
}

/// Upper-tail significance of `W` for sample size `n`.
fn sw_p_value(w: f64, one_minus_w: f64, n: usize) -> f64 {
    if n == 3 {
        // exact for n = 3
        let p = 6.0 / PI * (w.sqrt().asin() - 0.75f64.sqrt().asin());
        return p.clamp(0.0, 1.0);
    }
    if one_minus_w <= 0.0 {
        return 1.0;
    }
    let y = one_minus_w.ln();
    let std_normal = Normal::new(0.0, 1.0).expect("standard normal");
    let nf = n as f64;
    let (z, m, s) = if n <= 11 {
        let gamma = poly(&G, nf);
        if y >= gamma {
            return 0.0;
        }
        (-(gamma - y).ln(), poly(&C3, nf), poly(&C4, nf).exp())
    } else {
        let ln_n = nf.ln();
        (y, poly(&C5, ln_n), poly(&C6, ln_n).exp())
    };
    std_normal.sf((z - m) / s).clamp(0.0, 1.0)
}

/// Shapiro–Wilk W test; kurtosis and skewness are reported alongside.
pub fn shapiro_wilk<T: Scalar>(x: &[T]) -> Result<NormalityReport<T>> {
    let n = x.len();
    if !(SW_MIN_N..=SW_MAX_N).contains(&n) {
        return Err(Error::SampleSizeOutOfRange {
            n,
            min: SW_MIN_N,
            max: SW_MAX_N,
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite sample value".into()));
    }
    let kurt = kurtosis(x)?;
    let skew = skewness(x)?;

    let mut sorted: Vec<f64> = x.iter().map(|v| v.to_f64().unwrap()).collect();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let range = sorted[n - 1] - sorted[0];
    if range <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    // scale to unit range; W is affine invariant
    let scaled: Vec<f64> = sorted.iter().map(|v| (v - sorted[0]) / range).collect();
    let mean = scaled.iter().sum::<f64>() / n as f64;

    let half = sw_coefficients(n);
    let coef = |i: usize| -> f64 {
        if i < n / 2 {
            -half[i]
        } else if n % 2 == 1 && i == n / 2 {
            0.0
        } else {
            half[n - 1 - i]
        }
    };
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, &v) in scaled.iter().enumerate() {
        let a = coef(i);
        let d = v - mean;
        ssa += a * a;
        ssx += d * d;
        sax += a * d;
    }
    let root = (ssa * ssx).sqrt();
    let one_minus_w = ((root - sax) * (root + sax) / (ssa * ssx)).max(0.0);
    let w = 1.0 - one_minus_w;
    let p = sw_p_value(w, one_minus_w, n);

    Ok(NormalityReport {
        n,
        w: lit(w),
        p_value: lit(p),
        kurtosis: kurt,
        skewness: skew,
        normal_at_5pct: p > SIGNIFICANCE,
    })
}
