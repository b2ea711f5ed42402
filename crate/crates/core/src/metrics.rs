//! Per-group metrics: h-index, mean h with standard error, Lorenz curve,
//! Gini coefficient and the h-group.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Group;
use crate::scalar::{from_u64, from_usize, Scalar};

/// Largest `k` such that at least `k` entries are `>= k`. Zero for an empty list.
pub fn h_index(citations: &[u64]) -> u32 {
    let mut sorted = citations.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c >= (i as u64 + 1))
        .count() as u32
}

/// The h-index of a multiset of member h-indexes.
pub fn h_group_of(hs: &[u32]) -> u32 {
    let mut sorted = hs.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &h)| h as usize > i)
        .count() as u32
}

/// Maximum `H` such that at least `H` members have h-index `>= H`.
pub fn h_group(group: &Group) -> u32 {
    h_group_of(&group.h_indexes())
}

/// Mean member h-index and its standard error `sqrt(var / n)`, with the
/// unbiased sample variance. The standard error of a single member is zero.
pub fn group_summary<T: Scalar>(group: &Group) -> (T, T) {
    summary_of(&group.h_indexes())
}

pub(crate) fn summary_of<T: Scalar>(hs: &[u32]) -> (T, T) {
    let n = from_usize::<T>(hs.len());
    let mean = hs.iter().map(|&h| T::from_u32(h).unwrap()).sum::<T>() / n;
    if hs.len() < 2 {
        return (mean, T::zero());
    }
    let ss: T = hs
        .iter()
        .map(|&h| {
            let d = T::from_u32(h).unwrap() - mean;
            d * d
        })
        .sum();
    let var = ss / from_usize::<T>(hs.len() - 1);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorenzPoint<T> {
    /// Fraction of members, `i / n`.
    pub f: T,
    /// Share of the total h held by the `i` lowest members.
    pub phi: T,
}

/// Lorenz curve over members sorted by ascending h. The origin is implicit;
/// the last point is always `(1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzCurve<T> {
    pub points: Vec<LorenzPoint<T>>,
}

/// Ascending h values and their running sums.
fn cumulative(hs: &[u32]) -> (Vec<u32>, Vec<u64>) {
    let mut sorted = hs.to_vec();
    sorted.sort_unstable();
    let mut acc = 0u64;
    let cum = sorted
        .iter()
        .map(|&h| {
            acc += u64::from(h);
            acc
        })
        .collect();
    (sorted, cum)
}

pub fn lorenz_curve<T: Scalar>(group: &Group) -> Result<LorenzCurve<T>> {
    lorenz_of(&group.h_indexes()).ok_or_else(|| degenerate(group))
}

pub(crate) fn lorenz_of<T: Scalar>(hs: &[u32]) -> Option<LorenzCurve<T>> {
    let (_, cum) = cumulative(hs);
    let total = *cum.last()?;
    if total == 0 {
        return None;
    }
    let n = from_usize::<T>(hs.len());
    let total_t = from_u64::<T>(total);
    let points = cum
        .iter()
        .enumerate()
        .map(|(i, &c)| LorenzPoint {
            f: from_usize::<T>(i + 1) / n,
            phi: from_u64::<T>(c) / total_t,
        })
        .collect();
    Some(LorenzCurve { points })
}

/// Gini coefficient as an exact fraction in lowest terms.
///
/// Trapezoidal rule over the Lorenz curve,
/// `g = 1 - (1/n) * sum_{k=1..n} (phi_k + phi_{k-1})` with `phi_0 = 0` and
/// `phi_n = 1`. With `C_k` the running sums of ascending h this is
/// `((n + 1) C_n - 2 sum_k C_k) / (n C_n)`.
pub fn gini_exact(group: &Group) -> Result<Ratio<u128>> {
    gini_exact_of(&group.h_indexes()).ok_or_else(|| degenerate(group))
}

pub(crate) fn gini_exact_of(hs: &[u32]) -> Option<Ratio<u128>> {
    let (_, cum) = cumulative(hs);
    let total = u128::from(*cum.last()?);
    if total == 0 {
        return None;
    }
    let n = hs.len() as u128;
    let running: u128 = cum.iter().map(|&c| u128::from(c)).sum();
    let numer = (n + 1) * total - 2 * running;
    Some(Ratio::new(numer, n * total))
}

/// Gini coefficient of member h-indexes, in `[0, 1)`.
pub fn gini<T: Scalar>(group: &Group) -> Result<T> {
    gini_exact(group).map(|r| ratio_to_scalar(&r))
}

pub(crate) fn gini_of<T: Scalar>(hs: &[u32]) -> Option<T> {
    gini_exact_of(hs).map(|r| ratio_to_scalar(&r))
}

fn ratio_to_scalar<T: Scalar>(r: &Ratio<u128>) -> T {
    T::from_u128(*r.numer()).unwrap() / T::from_u128(*r.denom()).unwrap()
}

/// Points `(h_i, n - i + 1)` over ascending h: the number of members with
/// h-index at least `h_i`, counting ties by position.
pub fn psi_curve(group: &Group) -> Vec<(u32, usize)> {
    let mut sorted = group.h_indexes();
    sorted.sort_unstable();
    let n = sorted.len();
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, h)| (h, n - i))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupMetrics<T> {
    pub n: usize,
    pub mean_h: T,
    pub stderr_h: T,
    pub h_group: u32,
    pub gini: T,
    pub lorenz: LorenzCurve<T>,
}

/// Every per-group metric at once. Fails on all-zero groups.
pub fn group_metrics<T: Scalar>(group: &Group) -> Result<GroupMetrics<T>> {
    let hs = group.h_indexes();
    let (mean_h, stderr_h) = summary_of(&hs);
    let lorenz = lorenz_of(&hs).ok_or_else(|| degenerate(group))?;
    let gini = gini_of(&hs).ok_or_else(|| degenerate(group))?;
    Ok(GroupMetrics {
        n: hs.len(),
        mean_h,
        stderr_h,
        h_group: h_group_of(&hs),
        gini,
        lorenz,
    })
}

fn degenerate(group: &Group) -> Error {
    Error::DegenerateGroup {
        group_id: group.id().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ResearcherProfile;
    use proptest::prelude::*;

    fn group(hs: &[u32]) -> Group {
        let members = hs
            .iter()
            .enumerate()
            .map(|(i, &h)| ResearcherProfile::summary(format!("m{i}"), h, None))
            .collect();
        Group::unlabeled("g", members).unwrap()
    }

    /// Direct definition scan: try every k.
    fn h_index_oracle(c: &[u64]) -> u32 {
        (0..=c.len() as u64)
            .filter(|&k| c.iter().filter(|&&x| x >= k).count() as u64 >= k)
            .max()
            .unwrap() as u32
    }

    /// 1 - 2 * (trapezoid area under the Lorenz polyline through the origin).
    fn gini_area_oracle(hs: &[u32]) -> f64 {
        let mut s: Vec<f64> = hs.iter().map(|&h| h as f64).collect();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let total: f64 = s.iter().sum();
        let n = s.len() as f64;
        let (mut area, mut prev_f, mut prev_phi, mut acc) = (0.0, 0.0, 0.0, 0.0);
        for (i, h) in s.iter().enumerate() {
            acc += h;
            let f = (i + 1) as f64 / n;
            let phi = acc / total;
            area += (f - prev_f) * (phi + prev_phi) / 2.0;
            prev_f = f;
            prev_phi = phi;
        }
        1.0 - 2.0 * area
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(h_index(&[]), 0);
        assert_eq!(h_index(&[10, 8, 5, 4, 3]), 4);
        assert_eq!(h_index(&[1, 1, 1, 1, 1]), 1);
        assert_eq!(h_index(&[0, 0]), 0);
    }

    #[test]
    fn summary_examples() {
        assert_eq!(group_summary::<f64>(&group(&[5, 5, 5])), (5.0, 0.0));
        assert_eq!(group_summary::<f64>(&group(&[2, 4])), (3.0, 1.0));
        assert_eq!(group_summary::<f64>(&group(&[7])), (7.0, 0.0));
    }

    #[test]
    fn lorenz_examples() {
        let eq = lorenz_curve::<f64>(&group(&[1, 1, 1, 1])).unwrap();
        let pts: Vec<(f64, f64)> = eq.points.iter().map(|p| (p.f, p.phi)).collect();
        assert_eq!(pts, vec![(0.25, 0.25), (0.5, 0.5), (0.75, 0.75), (1.0, 1.0)]);

        let c = lorenz_curve::<f64>(&group(&[3, 1])).unwrap();
        let pts: Vec<(f64, f64)> = c.points.iter().map(|p| (p.f, p.phi)).collect();
        assert_eq!(pts, vec![(0.5, 0.25), (1.0, 1.0)]);

        assert!(matches!(
            lorenz_curve::<f64>(&group(&[0, 0, 0])),
            Err(Error::DegenerateGroup { .. })
        ));
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini::<f64>(&group(&[4, 4, 4, 4, 4, 4, 4])).unwrap(), 0.0);
        assert_eq!(gini::<f64>(&group(&[1, 3])).unwrap(), 0.25);
        assert!((gini::<f64>(&group(&[1, 2, 3])).unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(gini_exact(&group(&[1, 2, 3])).unwrap(), Ratio::new(2, 9));
        assert!(gini::<f64>(&group(&[0, 0])).is_err());
        assert_eq!(gini::<f32>(&group(&[1, 3])).unwrap(), 0.25f32);
    }

    #[test]
    fn h_group_examples() {
        assert_eq!(h_group(&group(&[1, 2, 3, 4, 5])), 3);
        assert_eq!(h_group(&group(&[0, 0])), 0);
        assert_eq!(h_group(&group(&[1, 2, 3])), 2);
        assert_eq!(h_group(&group(&[7])), 1);
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_curve(&group(&[3, 1, 2])), vec![(1, 3), (2, 2), (3, 1)]);
        assert_eq!(psi_curve(&group(&[5, 5])), vec![(5, 2), (5, 1)]);
    }

    #[test]
    fn group_metrics_rejects_all_zero() {
        assert!(group_metrics::<f64>(&group(&[0, 0, 0])).is_err());
        let m = group_metrics::<f64>(&group(&[1, 2, 3])).unwrap();
        assert_eq!(m.n, 3);
        assert_eq!(m.h_group, 2);
        assert_eq!(m.lorenz.points.len(), 3);
    }

    fn nonzero_hs(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..=100, 1..=max_len)
            .prop_filter("some h positive", |v| v.iter().any(|&h| h > 0))
    }

    proptest! {
        #[test]
        fn h_index_matches_definition_scan(c in prop::collection::vec(0u64..40, 0..40)) {
            prop_assert_eq!(h_index(&c), h_index_oracle(&c));
        }

        #[test]
        fn h_group_is_h_index_of_member_hs(hs in prop::collection::vec(0u32..=100, 1..=60)) {
            let as_u64: Vec<u64> = hs.iter().map(|&h| h as u64).collect();
            prop_assert_eq!(h_group(&group(&hs)), h_index_oracle(&as_u64));
        }

        #[test]
        fn h_group_is_largest_h_on_psi_with_psi_at_least_h(hs in prop::collection::vec(0u32..=30, 1..=40)) {
            let g = group(&hs);
            // Largest H with at least H members >= H, read off the psi staircase.
            let from_psi = psi_curve(&g)
                .iter()
                .map(|&(h, psi)| (h as usize).min(psi))
                .max()
                .unwrap() as u32;
            prop_assert_eq!(h_group(&g), from_psi);
        }

        #[test]
        fn gini_matches_lorenz_area(hs in nonzero_hs(50)) {
            let g = gini::<f64>(&group(&hs)).unwrap();
            prop_assert!((g - gini_area_oracle(&hs)).abs() <= 1e-12);
            prop_assert!((0.0..1.0).contains(&g));
        }

        #[test]
        fn gini_zero_iff_all_equal(hs in nonzero_hs(30)) {
            let g = gini::<f64>(&group(&hs)).unwrap();
            let equal = hs.iter().all(|&h| h == hs[0]);
            prop_assert_eq!(g == 0.0, equal);
        }

        #[test]
        fn metrics_are_permutation_invariant(hs in nonzero_hs(30), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut shuffled = hs.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let (a, b) = (group(&hs), group(&shuffled));
            prop_assert_eq!(gini::<f64>(&a).unwrap(), gini::<f64>(&b).unwrap());
            prop_assert_eq!(lorenz_curve::<f64>(&a).unwrap(), lorenz_curve::<f64>(&b).unwrap());
            prop_assert_eq!(h_group(&a), h_group(&b));
            prop_assert_eq!(psi_curve(&a), psi_curve(&b));
            let (ma, sa) = group_summary::<f64>(&a);
            let (mb, sb) = group_summary::<f64>(&b);
            prop_assert!((ma - mb).abs() < 1e-12 && (sa - sb).abs() < 1e-12);
        }

        #[test]
        fn lorenz_and_gini_scale_invariant(hs in prop::collection::vec(0u32..=100, 1..=40), c in 1u32..=50) {
            prop_assume!(hs.iter().any(|&h| h > 0));
            let scaled: Vec<u32> = hs.iter().map(|&h| h * c).collect();
            prop_assert_eq!(gini_exact(&group(&hs)).unwrap(), gini_exact(&group(&scaled)).unwrap());
            prop_assert_eq!(gini::<f64>(&group(&hs)).unwrap(), gini::<f64>(&group(&scaled)).unwrap());
            let a = lorenz_curve::<f64>(&group(&hs)).unwrap();
            let b = lorenz_curve::<f64>(&group(&scaled)).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn lorenz_curve_invariants(hs in nonzero_hs(50)) {
            let c = lorenz_curve::<f64>(&group(&hs)).unwrap();
            let n = hs.len();
            prop_assert_eq!(c.points[0].f, 1.0 / n as f64);
            prop_assert_eq!(*c.points.last().unwrap(), LorenzPoint { f: 1.0, phi: 1.0 });
            let mut prev = 0.0;
            let mut prev_inc = 0.0;
            for p in &c.points {
                let inc = p.phi - prev;
                prop_assert!(inc >= -1e-15);
                prop_assert!(inc >= prev_inc - 1e-12);
                prop_assert!(p.phi <= p.f + 1e-12);
                prev = p.phi;
                prev_inc = inc;
            }
        }

        #[test]
        fn h_group_monotone_under_member_addition(hs in prop::collection::vec(0u32..=50, 1..=40), extra in 0u32..=60) {
            let mut more = hs.clone();
            more.push(extra);
            prop_assert!(h_group(&group(&more)) >= h_group(&group(&hs)));
            let h = h_group(&group(&hs));
            prop_assert!(h as usize <= hs.len());
            prop_assert!(h <= *hs.iter().max().unwrap());
        }
    }
}
