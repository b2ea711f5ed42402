//! Special functions: Gamma and the modified Bessel function `I_1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument accepted by [`bessel_i1`]; `e^x` overflows `f64` soon after.
pub const BESSEL_I1_MAX_ARG: f64 = 700.0;

const SERIES_LIMIT: f64 = 15.0;

/// `ln Γ(x)` for `x > 0`, Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    if x < lit(0.5) {
        // reflection: Γ(x) Γ(1 - x) = π / sin(πx)
        let pi = lit::<T>(PI);
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (x + T::from_usize(i).unwrap());
    }
    let t = x + lit(LANCZOS_G + 0.5);
    lit::<T>(0.5 * (2.0 * PI).ln()) + (x + lit(0.5)) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for `x > 0`.
pub fn gamma<T: Scalar>(x: T) -> T {
    ln_gamma(x).exp()
}

/// Modified Bessel function of the first kind, order one.
///
/// Power series below 15, asymptotic expansion above. Fails for negative
/// or NaN arguments and above [`BESSEL_I1_MAX_ARG`].
pub fn bessel_i1<T: Scalar>(x: T) -> Result<T> {
    let xf = x.to_f64().unwrap_or(f64::NAN);
    if !(xf >= 0.0) {
        return Err(Error::Domain(format!("bessel_i1 requires x >= 0, got {xf}")));
    }
    if xf > BESSEL_I1_MAX_ARG {
        return Err(Error::Overflow { x: xf });
    }
    let v = if xf < SERIES_LIMIT {
        i1_series(x)
    } else {
        i1_asymptotic_scaled(x) * x.exp()
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { x: xf })
    }
}

/// `e^{-x} I_1(x)` for `x >= 0`; finite for every finite argument.
pub fn bessel_i1_scaled<T: Scalar>(x: T) -> Result<T> {
    let xf = x.to_f64().unwrap_or(f64::NAN);
    if !(xf >= 0.0) || xf.is_infinite() {
        return Err(Error::Domain(format!(
            "bessel_i1_scaled requires finite x >= 0, got {xf}"
        )));
    }
    Ok(if xf < SERIES_LIMIT {
        i1_series(x) * (-x).exp()
    } else {
        i1_asymptotic_scaled(x)
    })
}

/// Σ (x/2)^(2m+1) / (m! (m+1)!)
fn i1_series<T: Scalar>(x: T) -> T {
    let half = x / lit(2.0);
    let q = half * half;
    let mut term = half;
    let mut sum = term;
    for m in 1..200 {
        let mf = T::from_u32(m).unwrap();
        term = term * q / (mf * (mf + T::one()));
        sum = sum + term;
        if term <= sum * T::epsilon() {
            break;
        }
    }
    sum
}

/// `e^{-x} I_1(x) ≈ (2πx)^{-1/2} Σ_k (-1)^k Π_{j≤k} (4 - (2j-1)^2) / (k! (8x)^k)`,
/// truncated at the smallest term.
fn i1_asymptotic_scaled<T: Scalar>(x: T) -> T {
    let eight_x = lit::<T>(8.0) * x;
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..100u32 {
        let odd = T::from_u32(2 * k - 1).unwrap();
        let next = -term * (lit::<T>(4.0) - odd * odd) / (T::from_u32(k).unwrap() * eight_x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum = sum + term;
        if term.abs() <= sum.abs() * T::epsilon() {
            break;
        }
    }
    sum / (lit::<T>(2.0 * PI) * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_at_integers_and_half() {
        let mut fact = 1.0;
        for n in 1..20u32 {
            assert!(rel(gamma(n as f64), fact) < 1e-13, "Γ({n})");
            fact *= n as f64;
        }
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(0.1), 9.513_507_698_668_732) < 1e-13);
    }

    #[test]
    fn i1_known_values() {
        assert_eq!(bessel_i1(0.0).unwrap(), 0.0);
        assert!(rel(bessel_i1(1.0).unwrap(), 0.565_159_103_992_485) < 1e-14);
        assert!(rel(bessel_i1(10.0).unwrap(), 2_670.988_303_701_254_6) < 1e-13);
        assert!(rel(bessel_i1(30.0).unwrap(), 768_532_038_938.956_9) < 1e-12);
    }

    #[test]
    fn i1_domain_guards() {
        assert!(matches!(bessel_i1(-1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i1(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_i1(700.5), Err(Error::Overflow { .. })));
        assert!(bessel_i1(700.0f64).unwrap().is_finite());
        assert!(bessel_i1_scaled(5000.0).unwrap() > 0.0);
    }

    #[test]
    fn i1_continuous_at_switch_and_increasing() {
        let below = bessel_i1(SERIES_LIMIT - 1e-12).unwrap();
        let above = bessel_i1(SERIES_LIMIT).unwrap();
        assert!(rel(below, above) < 1e-10);
        let mut prev = 0.0;
        for i in 1..=7000 {
            let v = bessel_i1(i as f64 * 0.1).unwrap();
            assert!(v > prev, "not increasing at {}", i as f64 * 0.1);
            prev = v;
        }
    }

    #[test]
    fn f32_paths() {
        assert!((bessel_i1(1.0f32).unwrap() - 0.565_159_1).abs() < 1e-6);
        assert!((gamma(5.0f32) - 24.0).abs() < 1e-4);
    }
}
