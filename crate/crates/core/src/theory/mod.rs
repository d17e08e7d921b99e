//! Resemblance estimators and closed-form moments of the two densification
//! schemes.
//!
//! All formulas are generic over [`Scalar`](crate::Scalar): use `f64` for
//! experiments and [`Rational`](crate::Rational) for exact identities.

mod estimate;
mod pair;
mod pmf;
mod variance;

pub use estimate::{estimate_resemblance, match_count, simultaneous_empty_count};
pub use pair::PairStats;
pub use pmf::{empty_bin_pmf, EmptyBinDistribution, LogSumDiagnostics};
pub use variance::{
    variance_bidirectional, variance_gap, variance_rotation, VarianceBreakdown,
};
