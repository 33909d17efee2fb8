//! Exact laws and samplers for the skeleton decomposition of the uniform
//! infinite planar quadrangulation (UIPQ), together with a rotation-system
//! realization of truncated quadrangulations of the cylinder, Krikun-style
//! separating cycles, and a discrete-bridge experiment.
//!
//! Every closed-form quantity is computed with exact rationals; every sampler
//! is a pure function of its parameters and an [`RngStream`].

pub mod bridge;
pub mod cli;
pub mod error;
pub mod exactlaws;
pub mod geometry;
pub mod rng;
pub mod selftest;
pub mod skeleton;
pub mod stats;

pub use error::{Error, Result};
pub use exactlaws::{ExactRational, LawTable, NegBinomialParams, TruncatedSeries};
pub use rng::RngStream;

/// Artifact version embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
