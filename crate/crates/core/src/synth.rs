//! Seeded synthetic populations.
//!
//! Stretched-exponential citation counts are drawn by inverting a CDF at a
//! uniform `U` on `(0, 1)`. Two readings of `exp(-(x/x0)^beta)` are offered:
//!
//! * [`StretchedExpForm::Density`] (default): the density is proportional to
//!   `exp(-(x/x0)^beta)`. Then `(x/x0)^beta` is Gamma(1/beta) distributed and
//!   `x = x0 P^{-1}(1/beta, U)^{1/beta}`, `P` the regularized lower incomplete
//!   gamma. This is the law whose moment ratios `fit_beta` matches.
//! * [`StretchedExpForm::Survival`]: the survival function is
//!   `exp(-(x/x0)^beta)` (Weibull), `x = x0 (-ln(1-U))^{1/beta}`.

use rand::distr::Open01;
use rand::Rng;
use serde::Serialize;
use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::error::{Error, Result};
use crate::model::{Group, ResearcherProfile};
use crate::scalar::{lit, Scalar};
use crate::special::ln_gamma;
use crate::stream::SeedStream;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StretchedExpForm {
    #[default]
    Density,
    Survival,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StretchedExpParams {
    beta: f64,
    x0: f64,
}

impl StretchedExpParams {
    pub fn new(beta: f64, x0: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must be positive and finite, got {beta}"),
            });
        }
        if !(x0 > 0.0) || !x0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "x0",
                reason: format!("must be positive and finite, got {x0}"),
            });
        }
        Ok(Self { beta, x0 })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }
}

/// `P^{-1}(a, p)` by Halley steps from the Numerical Recipes starting guess.
/// `q = 1 - p` is passed separately so the upper tail keeps its precision.
fn inverse_gamma_p(a: f64, p: f64, q: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if q <= 0.0 {
        return f64::INFINITY;
    }
    let gln = ln_gamma(a);
    let a1 = a - 1.0;
    let (lna1, afac) = if a > 1.0 {
        let lna1 = a1.ln();
        (lna1, (a1 * (lna1 - 1.0) - gln).exp())
    } else {
        (0.0, 0.0)
    };

    let mut x = if a > 1.0 {
        let pp = if p < 0.5 { p } else { q };
        let t = (-2.0 * pp.ln()).sqrt();
        let mut z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if p < 0.5 {
            z = -z;
        }
        (a * (1.0 - 1.0 / (9.0 * a) - z / (3.0 * a.sqrt())).powi(3)).max(1e-3)
    } else {
        let t = 1.0 - a * (0.253 + a * 0.12);
        if p < t {
            (p / t).powf(1.0 / a)
        } else {
            1.0 - (q / (1.0 - t)).ln()
        }
    };

    for _ in 0..32 {
        if x <= 0.0 {
            return 0.0;
        }
        let err = if p < 0.5 {
            gamma_lr(a, x) - p
        } else {
            q - gamma_ur(a, x)
        };
        let density = if a > 1.0 {
            afac * (-(x - a1) + a1 * (x.ln() - lna1)).exp()
        } else {
            (-x + a1 * x.ln() - gln).exp()
        };
        if density == 0.0 {
            break;
        }
        let u = err / density;
        let step = u / (1.0 - 0.5 * (u * (a1 / x - 1.0)).min(1.0));
        x -= step;
        if x <= 0.0 {
            x = 0.5 * (x + step);
        }
        if step.abs() < 1e-14 * x {
            break;
        }
    }
    x
}

/// Quantile function of the chosen form at probability `u` in `(0, 1)`.
pub fn stretched_exp_quantile(params: &StretchedExpParams, form: StretchedExpForm, u: f64) -> f64 {
    let inv_beta = 1.0 / params.beta;
    let t = match form {
        StretchedExpForm::Survival => -(-u).ln_1p(),
        StretchedExpForm::Density => inverse_gamma_p(inv_beta, u, 1.0 - u),
    };
    params.x0 * t.powf(inv_beta)
}

/// Cumulative distribution function of the chosen form.
pub fn stretched_exp_cdf(params: &StretchedExpParams, form: StretchedExpForm, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let t = (x / params.x0).powf(params.beta);
    match form {
        StretchedExpForm::Survival => -(-t).exp_m1(),
        StretchedExpForm::Density => gamma_lr(1.0 / params.beta, t),
    }
}

/// `n` draws from the density-form law; bit-identical for identical inputs.
pub fn sample_stretched_exp<T: Scalar>(params: &StretchedExpParams, n: usize, stream: &SeedStream) -> Vec<T> {
    sample_stretched_exp_with_form(params, StretchedExpForm::Density, n, stream)
}

pub fn sample_stretched_exp_with_form<T: Scalar>(
    params: &StretchedExpParams,
    form: StretchedExpForm,
    n: usize,
    stream: &SeedStream,
) -> Vec<T> {
    let mut rng = stream.rng();
    (0..n)
        .map(|_| {
            let u: f64 = rng.sample(Open01);
            lit(stretched_exp_quantile(params, form, u))
        })
        .collect()
}

/// Draws rounded to the nearest integer, for use as citation counts.
pub fn sample_stretched_exp_rounded(
    params: &StretchedExpParams,
    form: StretchedExpForm,
    n: usize,
    stream: &SeedStream,
) -> Vec<u64> {
    sample_stretched_exp_with_form::<f64>(params, form, n, stream)
        .into_iter()
        .map(|x| if x >= u64::MAX as f64 { u64::MAX } else { x.round() as u64 })
        .collect()
}

/// A summary-only group with members `{id}-1`, `{id}-2`, ... carrying `member_hs`.
pub fn synth_group(id: &str, member_hs: &[u32]) -> Result<Group> {
    let members = member_hs
        .iter()
        .enumerate()
        .map(|(i, &h)| ResearcherProfile::summary(format!("{id}-{}", i + 1), h, None))
        .collect();
    Group::unlabeled(id, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::h_group;

    #[test]
    fn params_guard() {
        assert!(StretchedExpParams::new(0.0, 1.0).is_err());
        assert!(StretchedExpParams::new(0.28, -1.0).is_err());
        assert!(StretchedExpParams::new(f64::NAN, 1.0).is_err());
        assert!(StretchedExpParams::new(0.28, 1.0).is_ok());
    }

    #[test]
    fn survival_quantile_at_scale_point() {
        let p = StretchedExpParams::new(0.37, 4.5).unwrap();
        let u = 1.0 - (-1.0f64).exp();
        let x = stretched_exp_quantile(&p, StretchedExpForm::Survival, u);
        assert!((x - 4.5).abs() < 1e-14 * 4.5, "{x}");
    }

    #[test]
    fn quantile_inverts_cdf() {
        for beta in [0.2, 0.28, 0.5, 1.0, 2.5] {
            let p = StretchedExpParams::new(beta, 3.0).unwrap();
            for form in [StretchedExpForm::Density, StretchedExpForm::Survival] {
                for u in [1e-9, 1e-4, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-9] {
                    let x = stretched_exp_quantile(&p, form, u);
                    let back = stretched_exp_cdf(&p, form, x);
                    assert!((back - u).abs() < 1e-10 * u.max(1e-3), "{form:?} beta={beta} u={u}: {back}");
                }
            }
        }
    }

    #[test]
    fn exponential_mean() {
        let p = StretchedExpParams::new(1.0, 1.0).unwrap();
        for form in [StretchedExpForm::Density, StretchedExpForm::Survival] {
            let x: Vec<f64> = sample_stretched_exp_with_form(&p, form, 100_000, &SeedStream::new(3));
            let mean = x.iter().sum::<f64>() / x.len() as f64;
            assert!((mean - 1.0).abs() < 0.02, "{form:?}: {mean}");
        }
    }

    #[test]
    fn ks_distance_small() {
        for form in [StretchedExpForm::Density, StretchedExpForm::Survival] {
            let p = StretchedExpParams::new(0.28, 1.0).unwrap();
            let mut x: Vec<f64> = sample_stretched_exp_with_form(&p, form, 100_000, &SeedStream::new(17));
            x.sort_by(f64::total_cmp);
            let n = x.len() as f64;
            let d = x.iter().enumerate().fold(0.0f64, |d, (i, &v)| {
                let f = stretched_exp_cdf(&p, form, v);
                d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs())
            });
            assert!(d < 0.01, "{form:?}: {d}");
        }
    }

    #[test]
    fn deterministic_per_stream() {
        let p = StretchedExpParams::new(0.28, 1.0).unwrap();
        let a: Vec<f64> = sample_stretched_exp(&p, 500, &SeedStream::new(9));
        let b: Vec<f64> = sample_stretched_exp(&p, 500, &SeedStream::new(9));
        let c: Vec<f64> = sample_stretched_exp(&p, 500, &SeedStream::new(10));
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
        assert_ne!(a, c);
        assert!(a.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn rounded_draws() {
        let p = StretchedExpParams::new(0.5, 100.0).unwrap();
        let r = sample_stretched_exp_rounded(&p, StretchedExpForm::Density, 100, &SeedStream::new(2));
        let x: Vec<f64> = sample_stretched_exp(&p, 100, &SeedStream::new(2));
        for (ri, xi) in r.iter().zip(&x) {
            assert_eq!(*ri, xi.round() as u64);
        }
    }

    #[test]
    fn synth_group_examples() {
        let g = synth_group("g", &[1, 2, 3]).unwrap();
        assert_eq!(h_group(&g), 2);
        assert_eq!(g.members()[0].id(), "g-1");
        assert!(g.members().iter().all(|m| m.paper_citations().is_none()));
        assert_eq!(synth_group("g", &[5]).unwrap().len(), 1);
        assert!(matches!(synth_group("g", &[]), Err(Error::EmptyGroup { .. })));
    }
}
