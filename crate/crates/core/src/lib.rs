//! k-means seeding strategies benchmarked on provably well-separated
//! synthetic clusters.
//!
//! The crate bundles:
//!
//! - [`model`]: Euclidean primitives and the k-means cost in both its
//!   centroid and pairwise forms;
//! - [`seeding`]: six initialization strategies (uniform, true centers,
//!   squared-distance sampling, farthest-first, boosted candidate
//!   subsampling, deterministic greedy insertion);
//! - [`lloyd`]: the shared assign/update iteration with empty-cluster
//!   repair;
//! - [`datagen`]: a generator for 2-D grid datasets whose cluster balls keep
//!   a separation gap large enough that the intended clustering is the
//!   global cost minimizer;
//! - [`separation`]: the gap thresholds, a dataset verifier and an
//!   exhaustive optimal-clustering oracle for small instances;
//! - [`evaluation`]: the error/cost metrics and 30-run summaries;
//! - [`harness`]: experiment orchestration, tables, worst-case figures and
//!   deterministic seed derivation.
//!
//! The numeric kernels are generic over the scalar (see [`Float`]); the
//! aliases below fix `f64`, which is what the generator, the harness and the
//! CLI use.

pub mod datagen;
pub mod error;
pub mod evaluation;
pub mod harness;
pub mod lloyd;
pub mod model;
pub mod num;
pub mod seeding;
pub mod separation;

pub use error::{Error, Result};
pub use num::Float;

/// Double-precision point.
pub type Point64 = model::Point<f64>;
/// Double-precision dataset.
pub type Dataset64 = model::Dataset<f64>;
/// Double-precision clustering.
pub type Clustering64 = model::Clustering<f64>;
/// Double-precision labeled dataset.
pub type LabeledDataset64 = datagen::LabeledDataset<f64>;
/// Double-precision seed set.
pub type SeedSet64 = seeding::SeedSet<f64>;
/// Double-precision Lloyd result.
pub type LloydResult64 = lloyd::LloydResult<f64>;
/// Double-precision separation report.
pub type SeparationReport64 = separation::SeparationReport<f64>;
