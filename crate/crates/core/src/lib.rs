//! One permutation hashing (OPH) with two densification schemes.
//!
//! A single random permutation of the feature universe `[0, D)` is cut into
//! `k` equal bins; each bin keeps its minimum. Empty bins are then filled
//! from the nearest non-empty bin, either always to the right
//! ([`Scheme::Rotation`]) or to the left or right according to a fixed
//! random bit per bin ([`Scheme::Bidirectional`]). Both give `k` hashes in
//! `O(d + k)` whose per-bin collision probability equals the resemblance of
//! the two sets; the bidirectional scheme has provably lower variance.
//!
//! Modules:
//! - sketching: [`set`], [`permutation`], [`sketch`], [`densify`], [`family`]
//! - [`theory`]: estimators, the empty-bin distribution and exact variances,
//!   generic over [`Scalar`]
//! - [`lsh`]: `(K, L)` bucketing index and recall evaluation
//! - [`oracle`]: exhaustive enumeration and Monte Carlo checks

pub mod cost;
pub mod densify;
pub mod error;
pub mod family;
pub mod lsh;
pub mod oracle;
pub mod permutation;
pub mod scalar;
pub mod set;
pub mod sketch;
pub mod theory;
pub mod universe;

pub use cost::CostCounters;
pub use densify::{
    densify_bidirectional, densify_rotation, DensifiedSketch, DirectionBits, Scheme,
};
pub use error::{Error, Result};
pub use family::{sketch_pipeline, HashFamily};
pub use lsh::{build_index, meta_hash, query_candidates, FamilyConfig, LshIndex, LshParams, MetaHashKey};
pub use permutation::{minwise_hash, Permutation, PrefixPermutation, SeededPermutation};
pub use scalar::Scalar;
pub use set::{resemblance_exact, SparseBinarySet};
pub use sketch::{oph_sketch, BinValue, OphSketch};
pub use theory::{EmptyBinDistribution, PairStats, VarianceBreakdown};
pub use universe::UniverseParams;

/// Exact rational scalar for the theory formulas.
pub type Rational = num_rational::BigRational;

/// Empty-bin distribution in double precision.
pub type EmptyBinPmf = EmptyBinDistribution<f64>;
/// Empty-bin distribution in exact rationals.
pub type ExactEmptyBinPmf = EmptyBinDistribution<Rational>;
/// Variance breakdown in double precision.
pub type Variances = VarianceBreakdown<f64>;
/// Variance breakdown in exact rationals.
pub type ExactVariances = VarianceBreakdown<Rational>;
