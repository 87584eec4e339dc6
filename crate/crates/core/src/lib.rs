//! Stochastic six vertex models: Boolean-product colored vertex weights,
//! bit-parallel samplers, height functions, the discrete Hammersley
//! degeneration and limit-shape experiments.

pub mod degenerations;
pub mod error;
pub mod lattice;
pub mod lln;
pub mod lmatrix;
pub mod numeric;
pub mod report;
pub mod rng;
pub mod weights;

pub use error::{Error, Result};
pub use report::VerificationReport;

/// Version string embedded in every exported artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
