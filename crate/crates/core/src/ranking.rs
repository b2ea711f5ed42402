//! Cross-group ranking by the alpha-index.
//!
//! Groups of different sizes are made comparable by the relative h-group:
//! the mean h-group of random subsets whose size is that of the smallest
//! group. Each group's relative h-group is divided by its Gini coefficient
//! and the quotients are normalized to sum to one.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{gini_of, h_group_of};
use crate::model::Group;
use crate::scalar::{from_u64, from_usize, lit, Scalar};
use crate::stream::SeedStream;

pub const DEFAULT_N_SAMPLE: usize = 1000;
pub const DEFAULT_GINI_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct RankingConfig<T> {
    /// Monte Carlo subsets drawn per group.
    pub n_sample: usize,
    pub seed: u64,
    /// Subset size override. Defaults to the size of the smallest group.
    pub reference_size: Option<usize>,
    /// Lower clamp applied to Gini coefficients before dividing by them.
    pub gini_floor: T,
}

impl<T: Scalar> Default for RankingConfig<T> {
    fn default() -> Self {
        Self {
            n_sample: DEFAULT_N_SAMPLE,
            seed: 0,
            reference_size: None,
            gini_floor: lit(DEFAULT_GINI_FLOOR),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingRow<T> {
    pub group_id: String,
    pub gini: T,
    /// Absolute h-group; unknown when ranking precomputed values.
    pub h_group: Option<u32>,
    pub relative_h_group: T,
    pub alpha: T,
    /// 1-based position in descending alpha.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance<T> {
    pub seed: Option<u64>,
    pub n_sample: Option<usize>,
    pub gini_floor: T,
    /// Groups whose Gini coefficient was raised to the floor.
    pub floored_groups: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingReport<T> {
    pub reference_group_id: Option<String>,
    pub reference_size: Option<usize>,
    pub rows: Vec<RankingRow<T>>,
    pub provenance: Provenance<T>,
}

/// Mean h-group over `n_sample` subsets of `sample_size` members drawn
/// without replacement. Sample `j` draws from `stream.substream(j)`.
pub fn relative_h_group<T: Scalar>(
    target: &Group,
    sample_size: usize,
    n_sample: usize,
    stream: &SeedStream,
) -> Result<T> {
    relative_h_group_of(&target.h_indexes(), sample_size, n_sample, stream)
}

pub fn relative_h_group_of<T: Scalar>(
    hs: &[u32],
    sample_size: usize,
    n_sample: usize,
    stream: &SeedStream,
) -> Result<T> {
    if sample_size > hs.len() {
        return Err(Error::SampleTooLarge {
            sample_size,
            group_size: hs.len(),
        });
    }
    if n_sample == 0 {
        return Err(Error::InvalidParameter {
            name: "n_sample",
            reason: "must be at least 1".into(),
        });
    }
    if sample_size == hs.len() {
        return Ok(T::from_u32(h_group_of(hs)).unwrap());
    }
    let total: u64 = (0..n_sample as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream.substream(j).rng();
            let mut pool = hs.to_vec();
            let (chosen, _) = pool.partial_shuffle(&mut rng, sample_size);
            u64::from(h_group_of(chosen))
        })
        .sum();
    Ok(from_u64::<T>(total) / from_usize::<T>(n_sample))
}

/// Ranks `groups` by alpha-index.
///
/// The reference size is that of the smallest group (ties resolved by the
/// lexicographically smallest id) unless `config.reference_size` is set.
/// Group `l` (input order) samples from `SeedStream::new(seed).substream(l)`.
pub fn rank<T: Scalar>(groups: &[Group], config: &RankingConfig<T>) -> Result<RankingReport<T>> {
    if groups.len() < 2 {
        return Err(Error::TooFewGroups {
            required: 2,
            got: groups.len(),
        });
    }
    check_floor(config.gini_floor)?;
    if config.n_sample == 0 {
        return Err(Error::InvalidParameter {
            name: "n_sample",
            reason: "must be at least 1".into(),
        });
    }

    let smallest = groups
        .iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.id().cmp(b.id())))
        .expect("at least two groups");
    let (reference_group_id, reference_size) = match config.reference_size {
        None => (Some(smallest.id().to_string()), smallest.len()),
        Some(0) => {
            return Err(Error::InvalidParameter {
                name: "reference_size",
                reason: "must be at least 1".into(),
            })
        }
        Some(size) if size > smallest.len() => {
            return Err(Error::SampleTooLarge {
                sample_size: size,
                group_size: smallest.len(),
            })
        }
        Some(size) => (None, size),
    };

    let hs: Vec<Vec<u32>> = groups.iter().map(Group::h_indexes).collect();
    let ginis = groups
        .iter()
        .zip(&hs)
        .map(|(g, h)| {
            gini_of::<T>(h).ok_or_else(|| Error::DegenerateGroup {
                group_id: g.id().to_string(),
            })
        })
        .collect::<Result<Vec<T>>>()?;

    let master = SeedStream::new(config.seed);
    let relative = hs
        .par_iter()
        .enumerate()
        .map(|(l, h)| relative_h_group_of::<T>(h, reference_size, config.n_sample, &master.substream(l as u64)))
        .collect::<Result<Vec<T>>>()?;

    let inputs: Vec<(String, Option<u32>, T, T)> = groups
        .iter()
        .zip(&hs)
        .zip(relative.into_iter().zip(ginis))
        .map(|((g, h), (rel, gini))| (g.id().to_string(), Some(h_group_of(h)), rel, gini))
        .collect();
    let (rows, floored_groups) = weigh(inputs, config.gini_floor)?;

    Ok(RankingReport {
        reference_group_id,
        reference_size: Some(reference_size),
        rows,
        provenance: Provenance {
            seed: Some(config.seed),
            n_sample: Some(config.n_sample),
            gini_floor: config.gini_floor,
            floored_groups,
        },
    })
}

/// Applies only the alpha normalization to published `(id, relative h-group,
/// gini)` triples. Gini values below `gini_floor` (including zero or
/// negative ones) are clamped, never rejected.
pub fn rank_from_precomputed<T: Scalar>(
    rows: &[(String, T, T)],
    gini_floor: T,
) -> Result<RankingReport<T>> {
    if rows.is_empty() {
        return Err(Error::TooFewGroups {
            required: 1,
            got: 0,
        });
    }
    check_floor(gini_floor)?;
    let inputs = rows
        .iter()
        .map(|(id, rel, gini)| (id.clone(), None, *rel, *gini))
        .collect();
    let (rows, floored_groups) = weigh(inputs, gini_floor)?;
    Ok(RankingReport {
        reference_group_id: None,
        reference_size: None,
        rows,
        provenance: Provenance {
            seed: None,
            n_sample: None,
            gini_floor,
            floored_groups,
        },
    })
}

fn check_floor<T: Scalar>(floor: T) -> Result<()> {
    if floor.is_finite() && floor > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "gini_floor",
            reason: format!("must be positive and finite, got {floor}"),
        })
    }
}

type WeighInput<T> = (String, Option<u32>, T, T);

fn weigh<T: Scalar>(
    inputs: Vec<WeighInput<T>>,
    floor: T,
) -> Result<(Vec<RankingRow<T>>, Vec<String>)> {
    let mut floored = Vec::new();
    let mut amplified = Vec::with_capacity(inputs.len());
    for (id, _, rel, gini) in &inputs {
        if !(rel.is_finite() && *rel >= T::zero()) {
            return Err(Error::InvalidParameter {
                name: "relative_h_group",
                reason: format!("group `{id}` has {rel}; must be finite and non-negative"),
            });
        }
        // NaN compares false and is floored too.
        let g = if *gini >= floor {
            *gini
        } else {
            floored.push(id.clone());
            floor
        };
        amplified.push(*rel / g);
    }
    let mass: T = amplified.iter().copied().sum();
    if !(mass > T::zero()) {
        return Err(Error::InsufficientData(
            "every relative h-group is zero; alpha weights are undefined".into(),
        ));
    }

    let mut rows: Vec<RankingRow<T>> = inputs
        .into_iter()
        .zip(amplified)
        .map(|((group_id, h_group, relative_h_group, gini), a)| RankingRow {
            group_id,
            gini,
            h_group,
            relative_h_group,
            alpha: a / mass,
            rank: 0,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.alpha
            .partial_cmp(&a.alpha)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.group_id.cmp(&b.group_id))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.rank = i + 1;
    }
    floored.sort();
    Ok((rows, floored))
}
