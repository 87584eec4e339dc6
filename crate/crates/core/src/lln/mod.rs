//! Limit shapes, the block statistics `X_{m,n}` and convergence experiments.

mod convergence;
mod limit;
mod stats;
mod superadditive;

pub use convergence::{
    convergence_experiment, hammersley_experiment, ratio_f64, CauchyGap, ConvergenceReport, ConvergenceRow, SizeSummary,
};
pub use limit::{hammersley_limit, limit_shape_g};
pub use stats::{ks_two_sample, mean, sample_std, KsResult};
pub use superadditive::{compute_x, verify_ergodic_hypotheses, verify_superadditivity, ErgodicCheck, SIGNIFICANCE};
