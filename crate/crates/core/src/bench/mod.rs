//! Benchmark problems for noisy multi-objective optimization.

pub mod hypervolume;
pub mod truncnorm;
pub mod zdt;

pub use hypervolume::{delta_hv, hypervolume_2d, mean_delta_hv, HvConfig};
pub use truncnorm::truncnorm_sample;
pub use zdt::{ZdtSpec, ZdtVariant};
