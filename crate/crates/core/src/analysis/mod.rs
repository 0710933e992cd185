//! Mixing and hitting behaviour of the walk, and distances to uniform.

pub mod distance;
pub mod scans;
pub mod times;

pub use distance::{
    hellinger_product, hellinger_single, tv_bounds, tv_exact, CubeDistribution, CubeForm,
};
pub use scans::{
    mixing_threshold_scan, zeno_scan, ThresholdRow, ThresholdScan, ThresholdTrend, ZenoRow,
};
pub use times::{
    bisect, first_gamma_zero, hitting_times, mixing_times, HittingTime, MixingTime, MIX_ROOT_TOL,
};
