//! Citation and h-index distribution analyses.

pub mod giddings;
pub mod histogram;
pub mod moments;
pub mod normality;
pub mod simplex;
pub mod slope;

pub use giddings::{fit_giddings, fit_giddings_points, giddings_eval, GiddingsFit, GiddingsParams};
pub use histogram::{build_histogram, BinningMode, Histogram};
pub use moments::{
    default_beta_grid, default_k_grid, empirical_moment_ratio, fit_beta, theoretical_moment_ratio,
    MomentObjective, StretchedExpFit,
};
pub use normality::{kurtosis, shapiro_wilk, skewness, NormalityReport};
pub use slope::{power_law_slope, PowerLawFit};
