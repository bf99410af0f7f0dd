//! Ranking multivariate random vectors by center-outward quantile dominance.
//!
//! Samples are matched to an augmented grid of spheres and directions by
//! optimal transport ([`transport`]); the resulting empirical quantile maps
//! are compared levelwise ([`dominance`]) and sorted into fronts
//! ([`q_sort`]). [`smoo`] uses the sort as the survival step of an
//! evolutionary optimizer for noisy objectives, benchmarked on [`bench`].

pub mod assignment;
pub mod bench;
pub mod commands;
pub mod dominance;
pub mod error;
pub mod grid;
pub mod io;
pub mod rng;
pub mod smoo;
pub mod special;
pub mod threshold;
pub mod transport;

pub use dominance::{
    coupled_fraction, dominates_at, dominates_at_quantile, max_dominated_quantile, q_sort, DominanceTensor,
    FrontOrdering,
};
pub use error::{Error, Result};
pub use grid::{AugmentedGrid, GridSpec, RadialPolicy};
pub use threshold::{sample_threshold, Threshold, ThresholdInputs};
pub use transport::{co_map, EmpiricalCOMap, Orientation, SampleSet};
