//! Group-level bibliometrics: h-index, h-group, Gini coefficient and the
//! alpha-index ranking of researcher groups, plus the distribution analyses
//! used to study citation and h-index data.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`. The Gini coefficient is also available as
//! an exact rational through [`metrics::gini_exact`].

// `!(x > 0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distribution;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod ranking;
pub mod scalar;
pub mod special;
pub mod stream;
pub mod synth;

pub use error::{Error, Result};
pub use model::{validate, Dataset, Group, ResearcherProfile, Violation};
pub use scalar::Scalar;
pub use stream::SeedStream;

pub type LorenzCurve = metrics::LorenzCurve<f64>;
pub type LorenzPoint = metrics::LorenzPoint<f64>;
pub type GroupMetrics = metrics::GroupMetrics<f64>;
pub type RankingConfig = ranking::RankingConfig<f64>;
pub type RankingRow = ranking::RankingRow<f64>;
pub type RankingReport = ranking::RankingReport<f64>;
pub type Provenance = ranking::Provenance<f64>;
pub type StretchedExpFit = distribution::StretchedExpFit<f64>;
pub type GiddingsParams = distribution::GiddingsParams<f64>;
pub type GiddingsFit = distribution::GiddingsFit<f64>;
pub type NormalityReport = distribution::NormalityReport<f64>;
pub type Histogram = distribution::Histogram<f64>;
pub type PowerLawFit = distribution::PowerLawFit<f64>;
